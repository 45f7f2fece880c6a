// Copyright 2026 The sepwit authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file states.hpp
 * Pure product states with their k-parameter chart, separable
 * decompositions, and standard test families with known ground truth.
 *
 * Chart for one gauge-fixed unit vector in C^d (2d-2 parameters, angles
 * first, then phases):
 *   v_0     = cos t1
 *   v_m     = e^{i p_m} cos t_{m+1} prod_{l<=m} sin t_l   (m = 1..d-2)
 *   v_{d-1} = e^{i p_{d-1}} prod_{l<=d-1} sin t_l
 * with t_l in [0, pi/2] and p_m in [0, 2pi). Out-of-chart inputs are
 * clamped (angles) or wrapped mod 2pi (phases). The inverse map recovers
 * parameters exactly on the chart interior; boundary points (some |v_m|=0)
 * use the convention phase=0 for vanishing components.
 *
 * A ProductState concatenates the two factor charts: k = 2(M+N)-4 numbers,
 * factor A first.
 */
#pragma once

#include <optional>
#include <random>
#include <vector>

#include "sepwit/basis.hpp"
#include "sepwit/hermitian.hpp"

namespace sepwit {

namespace chart {

inline constexpr double half_pi = 1.5707963267948966;
inline constexpr double two_pi = 6.283185307179586;

inline double wrap_phase(double p) {
  double w = std::fmod(p, two_pi);
  if (w < 0) w += two_pi;
  return w;
}

inline double clamp_angle(double t) { return std::min(std::max(t, 0.0), half_pi); }

/// Forward chart: 2d-2 parameters -> gauge-compatible unit vector in C^d.
inline Vector to_vector(int d, const RealVector& p) {
  if (p.size() != 2 * d - 2) {
    throw InputError("chart::to_vector: expected " + std::to_string(2 * d - 2) +
                     " parameters for dimension " + std::to_string(d));
  }
  Vector v(d);
  double sines = 1.0;
  for (int m = 0; m < d; ++m) {
    double mag;
    if (m < d - 1) {
      const double t = clamp_angle(p(m));
      mag = sines * std::cos(t);
      sines *= std::sin(t);
    } else {
      mag = sines;
    }
    const double phase = (m == 0) ? 0.0 : wrap_phase(p(d - 2 + m));
    v(m) = std::polar(mag, phase);
  }
  return v;
}

/// Inverse chart; accepts any unit vector (phases are read off relative to
/// the global gauge of the input).
inline RealVector from_vector(const Vector& v) {
  const int d = static_cast<int>(v.size());
  RealVector p = RealVector::Zero(2 * d - 2);
  RealVector r(d);
  for (int m = 0; m < d; ++m) r(m) = std::abs(v(m));
  double tail = 0.0;  // sqrt(sum_{i>=m} r_i^2), built backwards
  RealVector tails(d + 1);
  tails(d) = 0.0;
  for (int m = d - 1; m >= 0; --m) {
    tail = std::hypot(tail, r(m));
    tails(m) = tail;
  }
  for (int m = 0; m < d - 1; ++m) p(m) = std::atan2(tails(m + 1), r(m));
  for (int m = 1; m < d; ++m)
    p(d - 2 + m) = (r(m) > tol::unit_vector) ? wrap_phase(std::arg(v(m))) : 0.0;
  return p;
}

}  // namespace chart

/// Gauge-fixed pure product state |alpha> (x) |beta>.
struct ProductState {
  Dims dims;
  Vector alpha;
  Vector beta;

  static ProductState from_vectors(Dims d, Vector a, Vector b) {
    if (a.size() != d.M || b.size() != d.N) {
      throw InputError("ProductState: factor sizes must be M and N");
    }
    const double na = a.norm(), nb = b.norm();
    if (na < tol::unit_vector || nb < tol::unit_vector) {
      throw InputError("ProductState: zero factor vector");
    }
    return ProductState{d, gauge_fix(a / na), gauge_fix(b / nb)};
  }

  /// Chart point -> state (out-of-chart values clamped/wrapped).
  static ProductState from_params(Dims d, const RealVector& p) {
    if (p.size() != d.k()) {
      throw InputError("ProductState::from_params: expected k = " +
                       std::to_string(d.k()) + " parameters");
    }
    const int ka = 2 * d.M - 2;
    Vector a = chart::to_vector(d.M, p.head(ka));
    Vector b = chart::to_vector(d.N, p.tail(2 * d.N - 2));
    return ProductState{d, gauge_fix(std::move(a)), gauge_fix(std::move(b))};
  }

  RealVector params() const {
    RealVector p(dims.k());
    p.head(2 * dims.M - 2) = chart::from_vector(alpha);
    p.tail(2 * dims.N - 2) = chart::from_vector(beta);
    return p;
  }

  Vector ket() const { return kron(alpha, beta); }

  Matrix op_matrix() const {
    const Vector v = ket();
    return v * v.adjoint();
  }

  HermitianOp op() const { return HermitianOp(dims, op_matrix()); }
};

struct WeightedTerm {
  double weight;
  ProductState state;
};

/// Convex combination of at most n pure product states.
struct SeparableDecomposition {
  Dims dims;
  std::vector<WeightedTerm> terms;

  SeparableDecomposition(Dims d, std::vector<WeightedTerm> t) : dims(d), terms(std::move(t)) {
    if (terms.empty()) throw InputError("SeparableDecomposition: no terms");
    if (static_cast<int>(terms.size()) > dims.n()) {
      throw InputError("SeparableDecomposition: more than n = " +
                       std::to_string(dims.n()) + " terms");
    }
    double sum = 0.0;
    for (const auto& wt : terms) {
      if (!(wt.weight > 0.0) || wt.weight > 1.0 + tol::weight_sum) {
        throw InputError("SeparableDecomposition: weights must lie in (0, 1]");
      }
      require_same_dims(dims, wt.state.dims, "SeparableDecomposition");
      sum += wt.weight;
    }
    if (std::abs(sum - 1.0) > tol::weight_sum) {
      throw InputError("SeparableDecomposition: weights must sum to 1 (got " +
                       std::to_string(sum) + ")");
    }
  }
};

/// sum_i w_i |a_i b_i><a_i b_i|; always a valid (PPT) density matrix.
inline DensityMatrix mix(const SeparableDecomposition& decomp) {
  Matrix m = Matrix::Zero(decomp.dims.mn(), decomp.dims.mn());
  for (const auto& wt : decomp.terms) m += wt.weight * wt.state.op_matrix();
  return DensityMatrix(HermitianOp(decomp.dims, std::move(m)));
}

/// The exact n-term product decomposition of the maximally mixed state.
inline SeparableDecomposition maximally_mixed_decomposition(Dims d) {
  std::vector<WeightedTerm> terms;
  terms.reserve(static_cast<std::size_t>(d.mn()));
  for (int i = 0; i < d.M; ++i)
    for (int j = 0; j < d.N; ++j) {
      Vector a = Vector::Zero(d.M), b = Vector::Zero(d.N);
      a(i) = 1.0;
      b(j) = 1.0;
      terms.push_back({1.0 / d.mn(), ProductState::from_vectors(d, a, b)});
    }
  return SeparableDecomposition(d, std::move(terms));
}

// ---------------------------------------------------------------------------
// Standard test states
// ---------------------------------------------------------------------------

/// |Phi+> = (|00> + |11>)/sqrt(2) on 2x2.
inline DensityMatrix bell_phi_plus() {
  Vector v(4);
  v << 1, 0, 0, 1;
  v /= std::sqrt(2.0);
  return DensityMatrix(HermitianOp(Dims(2, 2), v * v.adjoint()));
}

/// |Psi-> = (|01> - |10>)/sqrt(2) on 2x2.
inline DensityMatrix singlet() {
  Vector v(4);
  v << 0, 1, -1, 0;
  v /= std::sqrt(2.0);
  return DensityMatrix(HermitianOp(Dims(2, 2), v * v.adjoint()));
}

/// p |Psi-><Psi-| + (1-p) I/4. Separable iff p <= 1/3.
inline DensityMatrix werner(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InputError("werner: p must lie in [0, 1] (got " + std::to_string(p) + ")");
  }
  const Matrix m = p * singlet().mat() + (1.0 - p) * Matrix::Identity(4, 4) / 4.0;
  return DensityMatrix(HermitianOp(Dims(2, 2), m));
}

/// lambda |Phi_d+><Phi_d+| + (1-lambda) I/d^2 on d x d, with
/// |Phi_d+> = sum_i |ii>/sqrt(d). Separable iff lambda <= 1/(d+1).
inline DensityMatrix isotropic(int d, double lambda) {
  if (d < 2) throw InputError("isotropic: local dimension must be >= 2");
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw InputError("isotropic: lambda must lie in [0, 1]");
  }
  Vector v = Vector::Zero(d * d);
  for (int i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(double(d));
  Matrix m = lambda * (v * v.adjoint()) +
             (1.0 - lambda) * Matrix::Identity(d * d, d * d) / double(d * d);
  return DensityMatrix(HermitianOp(Dims(d, d), std::move(m)));
}

// ---------------------------------------------------------------------------
// Seeded random families (reproducible under a fixed seed)
// ---------------------------------------------------------------------------

inline Vector random_unit_vector(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(d);
  for (int i = 0; i < d; ++i) v(i) = Complex(gauss(rng), gauss(rng));
  return gauge_fix(v / v.norm());
}

inline ProductState random_product_state(Dims dims, std::mt19937_64& rng) {
  Vector a = random_unit_vector(dims.M, rng);
  Vector b = random_unit_vector(dims.N, rng);
  return ProductState::from_vectors(dims, std::move(a), std::move(b));
}

/// Hilbert-Schmidt random state: G G^dag / tr(G G^dag) with Ginibre G.
inline DensityMatrix random_state(Dims dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int d = dims.mn();
  Matrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
  Matrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix(HermitianOp(dims, std::move(m)));
}

/// Random mixture of r product states; the planted decomposition is
/// returned as ground truth.
inline std::pair<DensityMatrix, SeparableDecomposition> random_separable(
    Dims dims, int r, std::uint64_t seed) {
  if (r < 1) throw InputError("random_separable: need at least one term");
  if (r > dims.n()) throw InputError("random_separable: at most n terms");
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(static_cast<std::size_t>(r));
  double sum = 0.0;
  for (auto& x : w) {
    x = expo(rng) + 1e-12;
    sum += x;
  }
  std::vector<WeightedTerm> terms;
  terms.reserve(w.size());
  for (const double x : w) terms.push_back({x / sum, random_product_state(dims, rng)});
  SeparableDecomposition decomp(dims, std::move(terms));
  DensityMatrix rho = mix(decomp);
  return {std::move(rho), std::move(decomp)};
}

/// Uniform sample over the chart box (used for oracle multistarts).
inline ProductState random_chart_point(Dims dims, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uangle(0.0, chart::half_pi);
  std::uniform_real_distribution<double> uphase(0.0, chart::two_pi);
  RealVector p(dims.k());
  const int ka = 2 * dims.M - 2;
  const int kb = 2 * dims.N - 2;
  for (int i = 0; i < dims.M - 1; ++i) p(i) = uangle(rng);
  for (int i = dims.M - 1; i < ka; ++i) p(i) = uphase(rng);
  for (int i = 0; i < dims.N - 1; ++i) p(ka + i) = uangle(rng);
  for (int i = dims.N - 1; i < kb; ++i) p(ka + i) = uphase(rng);
  return ProductState::from_params(dims, p);
}

}  // namespace sepwit
