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
 * @file frank_wolfe.hpp
 * Frank-Wolfe projection onto the separable set: minimize ||rho - sigma||
 * over convex combinations of pure product states, with exact line search
 * on the quadratic objective. The linear subproblem is exactly the support
 * oracle in the direction of the residual. The iterate's atom list is
 * periodically reduced to at most n terms by affine-dependence elimination,
 * so a convergent run doubles as a constructive separability certificate.
 */
#pragma once

#include <algorithm>

#include "sepwit/oracle.hpp"

namespace sepwit {

struct FwOptions {
  long max_oracle_calls = 2000;
  int oracle_starts = 0;        // 0 -> max(4, k) small multistart per iteration
  std::uint64_t seed = 1;
  double stall_tol = 1e-14;     // stop when a step cannot reduce the distance
  bool certified_floor = false; // spend one grid call on a distance lower bound
  double floor_grid_h = 0.0;    // 0 -> auto
  int grid_k_max = 8;
  int threads = 0;
};

struct FwResult {
  double distance;
  SeparableDecomposition decomposition;
  long oracle_calls;
  bool converged;              // reached distance <= delta within budget
  double lower_bound;          // certified dist(rho, S) floor; 0 if not computed
  std::vector<double> distance_history;
};

namespace detail {

struct FwAtom {
  RealVector coeffs;  // canonical basis coefficients of the product state
  ProductState state;
};

/// Euclidean projection onto the probability simplex.
inline RealVector project_simplex(RealVector v) {
  const Eigen::Index m = v.size();
  std::vector<double> u(v.data(), v.data() + m);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double theta = 0.0;
  double cum = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    cum += u[static_cast<std::size_t>(i)];
    const double t = (cum - 1.0) / double(i + 1);
    if (u[static_cast<std::size_t>(i)] - t > 0) theta = t;
  }
  for (Eigen::Index i = 0; i < m; ++i) v(i) = std::max(0.0, v(i) - theta);
  return v;
}

/// min ||C w - target||^2 over the simplex (accelerated projected gradient).
inline RealVector simplex_least_squares(const RealMatrix& c, const RealVector& target,
                                        RealVector w0, int iterations) {
  const Eigen::Index m = c.cols();
  if (w0.size() != m) w0 = RealVector::Constant(m, 1.0 / double(m));
  const RealMatrix gram = c.transpose() * c;
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(gram, Eigen::EigenvaluesOnly);
  const double lip = std::max(1e-12, es.eigenvalues()(m - 1));
  const RealVector ct = c.transpose() * target;
  RealVector w = project_simplex(std::move(w0));
  RealVector y = w;
  double theta = 1.0;
  for (int it = 0; it < iterations; ++it) {
    const RealVector grad = gram * y - ct;
    RealVector w_next = project_simplex(y - grad / lip);
    const double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
    y = w_next + ((theta - 1.0) / theta_next) * (w_next - w);
    w = std::move(w_next);
    theta = theta_next;
  }
  return w;
}

/// Remove affinely dependent atoms while preserving the represented point
/// exactly, until at most max_terms remain. Weights stay nonnegative.
inline void caratheodory_prune(std::vector<FwAtom>& atoms, std::vector<double>& w,
                               int max_terms) {
  while (static_cast<int>(atoms.size()) > max_terms) {
    const int m = static_cast<int>(atoms.size());
    const Eigen::Index n = atoms[0].coeffs.size();
    // Rows: coefficient vectors plus the affine constraint sum nu_i = 0.
    RealMatrix sys(n + 1, m);
    for (int j = 0; j < m; ++j) {
      sys.col(j).head(n) = atoms[static_cast<std::size_t>(j)].coeffs;
      sys(n, j) = 1.0;
    }
    Eigen::FullPivLU<RealMatrix> lu(sys);
    const RealMatrix null_space = lu.kernel();
    if (null_space.cols() == 0 || null_space.col(0).cwiseAbs().maxCoeff() < 1e-14) {
      break;  // numerically independent; nothing to eliminate
    }
    RealVector nu = null_space.col(0);
    if (nu.maxCoeff() < -nu.minCoeff()) nu = -nu;  // ensure some positive entry
    double tau = std::numeric_limits<double>::infinity();
    int drop = -1;
    for (int j = 0; j < m; ++j) {
      if (nu(j) > 1e-14) {
        const double r = w[static_cast<std::size_t>(j)] / nu(j);
        if (r < tau) {
          tau = r;
          drop = j;
        }
      }
    }
    if (drop < 0) break;
    for (int j = 0; j < m; ++j) w[static_cast<std::size_t>(j)] -= tau * nu(j);
    w[static_cast<std::size_t>(drop)] = 0.0;
    atoms.erase(atoms.begin() + drop);
    w.erase(w.begin() + drop);
    // Drop numerical dust as well.
    for (int j = static_cast<int>(atoms.size()) - 1; j >= 0; --j) {
      if (w[static_cast<std::size_t>(j)] <= 1e-15) {
        atoms.erase(atoms.begin() + j);
        w.erase(w.begin() + j);
      }
    }
  }
}

inline RealVector product_state_coeffs(const OperatorBasis& basis, const ProductState& s) {
  const Matrix sa = s.alpha * s.alpha.adjoint();
  const Matrix sb = s.beta * s.beta.adjoint();
  return basis.product_coeffs(basis.factor_coeffs(sa, Subsystem::A),
                              basis.factor_coeffs(sb, Subsystem::B));
}

}  // namespace detail

/// Iterates sigma <- (1-gamma) sigma + gamma O(rho - sigma) with exact line
/// search; the distance is nonincreasing. Returns the best distance reached,
/// a decomposition with at most n terms, and (optionally) a certified lower
/// bound on dist(rho, S) from the final residual direction.
inline FwResult frank_wolfe_nearest(const DensityMatrix& rho, double delta,
                                    const FwOptions& opts = {},
                                    const OperatorBasis* basis_in = nullptr) {
  if (!(delta >= 0.0)) throw InputError("frank_wolfe_nearest: delta must be >= 0");
  const Dims dims = rho.dims();
  std::optional<OperatorBasis> owned;
  if (basis_in) {
    require_same_dims(basis_in->dims, dims, "frank_wolfe_nearest");
  } else {
    owned.emplace(OperatorBasis::build(dims));
  }
  const OperatorBasis& basis = basis_in ? *basis_in : *owned;

  const RealVector target = basis.coeffs(rho.op);
  const Eigen::Index n = target.size();

  OracleOptions oopts;
  oopts.starts = opts.oracle_starts > 0 ? opts.oracle_starts : std::max(4, dims.k());
  oopts.grid_policy = GridPolicy::Never;
  oopts.threads = opts.threads;

  std::vector<detail::FwAtom> atoms;
  std::vector<double> weights;
  RealVector sigma = RealVector::Zero(n);
  long calls = 0;
  std::vector<double> history;

  const double inf = std::numeric_limits<double>::infinity();
  const auto oracle_direction = [&](const RealVector& dir_coeffs,
                                    std::uint64_t stream) -> ProductState {
    RealVector c = dir_coeffs;
    c(0) = 0.0;  // identity component does not affect the argmax over states
    const double nrm = c.norm();
    if (nrm < 1e-15) {
      std::mt19937_64 r(mix_seed(opts.seed, stream));
      return random_product_state(dims, r);
    }
    OracleOptions o = oopts;
    o.seed = mix_seed(opts.seed, stream);
    const OracleReport rep = maximize(basis.from_coeffs(RealVector(c / nrm)), inf, 0.0, o);
    return rep.incumbent;
  };

  // First atom: the support point in the direction of rho itself.
  {
    ProductState s0 = oracle_direction(target, 0);
    ++calls;
    atoms.push_back({detail::product_state_coeffs(basis, s0), std::move(s0)});
    weights.push_back(1.0);
    sigma = atoms[0].coeffs;
  }

  double dist = (target - sigma).norm();
  history.push_back(dist);
  bool converged = dist <= delta;

  // Best-point-of-the-hull correction: re-fit the weights over the current
  // atoms, accepting only non-increasing distances.
  const auto reoptimize = [&]() {
    if (atoms.empty()) return;
    RealMatrix c(n, static_cast<Eigen::Index>(atoms.size()));
    for (std::size_t j = 0; j < atoms.size(); ++j)
      c.col(static_cast<Eigen::Index>(j)) = atoms[j].coeffs;
    RealVector w0(static_cast<Eigen::Index>(weights.size()));
    for (std::size_t j = 0; j < weights.size(); ++j)
      w0(static_cast<Eigen::Index>(j)) = weights[j];
    const RealVector w = detail::simplex_least_squares(c, target, w0, 200);
    const RealVector cand = c * w;
    if ((target - cand).squaredNorm() <= (target - sigma).squaredNorm()) {
      sigma = cand;
      for (std::size_t j = 0; j < weights.size(); ++j)
        weights[j] = w(static_cast<Eigen::Index>(j));
      for (int j = static_cast<int>(atoms.size()) - 1; j >= 0; --j) {
        if (weights[static_cast<std::size_t>(j)] <= 1e-15) {
          atoms.erase(atoms.begin() + j);
          weights.erase(weights.begin() + j);
        }
      }
    }
  };

  // Atom polish: with the other terms fixed, the optimal replacement for
  // atom j maximizes <target - sum_{i!=j} w_i s_i, s> over product states,
  // which is one warm-started ascent of the oracle's local backend. This is
  // what lets a planted decomposition be recovered to certificate accuracy;
  // the plain exchange step alone only drifts toward the planted atoms at a
  // sublinear rate.
  const auto polish = [&]() {
    std::vector<detail::FwAtom> saved_atoms = atoms;
    std::vector<double> saved_weights = weights;
    const RealVector saved_sigma = sigma;
    bool touched = false;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      if (calls >= opts.max_oracle_calls) break;
      RealVector rj = target - (sigma - weights[j] * atoms[j].coeffs);
      rj(0) = 0.0;
      const double nrm = rj.norm();
      if (nrm < 1e-15) continue;
      ++calls;
      const ProductState refined =
          seesaw_ascent(basis.from_coeffs(RealVector(rj / nrm)), atoms[j].state);
      RealVector rc = detail::product_state_coeffs(basis, refined);
      if (rj.dot(rc) > rj.dot(atoms[j].coeffs) + 1e-15) {
        sigma += weights[j] * (rc - atoms[j].coeffs);
        atoms[j] = {std::move(rc), refined};
        touched = true;
      }
    }
    if (!touched) return;
    reoptimize();
    if ((target - sigma).norm() > (target - saved_sigma).norm()) {
      atoms = std::move(saved_atoms);
      weights = std::move(saved_weights);
      sigma = saved_sigma;
    }
  };

  int iter = 0;
  while (!converged && calls < opts.max_oracle_calls) {
    const RealVector residual = target - sigma;
    ProductState s = oracle_direction(residual, static_cast<std::uint64_t>(calls));
    ++calls;
    RealVector sc = detail::product_state_coeffs(basis, s);
    const RealVector dirvec = sc - sigma;
    const double denom = dirvec.squaredNorm();
    const double ascent = residual.dot(dirvec);
    if (denom < 1e-18 || ascent <= opts.stall_tol) {
      break;  // no improving step toward any found atom
    }
    const double gamma = std::min(1.0, ascent / denom);
    for (auto& w : weights) w *= (1.0 - gamma);
    atoms.push_back({std::move(sc), std::move(s)});
    weights.push_back(gamma);
    sigma = (1.0 - gamma) * sigma + gamma * atoms.back().coeffs;

    reoptimize();
    ++iter;
    if (iter % 8 == 0) polish();

    if (static_cast<int>(atoms.size()) > 2 * dims.n()) {
      detail::caratheodory_prune(atoms, weights, dims.n());
      sigma.setZero();
      for (std::size_t j = 0; j < atoms.size(); ++j) sigma += weights[j] * atoms[j].coeffs;
    }
    const double d_now = (target - sigma).norm();
    dist = std::min(dist, d_now);
    history.push_back(d_now);
    converged = d_now <= delta;
  }

  // Final polish rounds (budget permitting), then reduce to at most n terms.
  for (int round = 0; round < 6 && calls < opts.max_oracle_calls; ++round) {
    const double before = (target - sigma).norm();
    polish();
    if ((target - sigma).norm() > before - 1e-15) break;
  }
  detail::caratheodory_prune(atoms, weights, dims.n());
  sigma.setZero();
  for (std::size_t j = 0; j < atoms.size(); ++j) sigma += weights[j] * atoms[j].coeffs;
  dist = std::min(dist, (target - sigma).norm());
  dist = (target - sigma).norm();
  converged = dist <= delta;

  double floor = 0.0;
  if (opts.certified_floor && dims.k() <= opts.grid_k_max) {
    // dist(rho, S) >= <u, rho> - max_sigma <u, sigma> for the unit residual u.
    RealVector u = target - sigma;
    const double un = u.norm();
    if (un > 1e-12) {
      u /= un;
      RealVector ut = u;
      ut(0) = 0.0;
      const double utn = ut.norm();
      if (utn > 1e-12) {
        OracleOptions go;
        go.grid_k_max = opts.grid_k_max;
        go.threads = opts.threads;
        const double h = opts.floor_grid_h > 0.0 ? opts.floor_grid_h
                                                 : auto_grid_h(dims);
        const GridCertificate gc = grid_certify(basis.from_coeffs(RealVector(ut / utn)), h, go);
        const double support_u = u(0) / std::sqrt(double(dims.mn())) + utn * gc.f_upper;
        floor = std::max(0.0, u.dot(target) - support_u);
      }
    }
  }

  std::vector<WeightedTerm> terms;
  double wsum = 0.0;
  for (const double w : weights) wsum += w;
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    if (weights[j] > 1e-15) terms.push_back({weights[j] / wsum, atoms[j].state});
  }
  SeparableDecomposition decomp(dims, std::move(terms));
  return FwResult{dist, std::move(decomp), calls, converged, floor, std::move(history)};
}

}  // namespace sepwit
