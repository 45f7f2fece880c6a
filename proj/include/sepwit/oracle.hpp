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
 * @file oracle.hpp
 * The support oracle over pure product states: maximize f(s) = tr(A s) for
 * a Hermitian A, with a cheap monotone local backend (multistart see-saw
 * ascent) and a certified global upper bound (grid + Lipschitz padding) at
 * small dimensions.
 *
 * Certified bound. Fix the factor with the smaller local dimension, say
 * alpha in C^M, and let g(alpha) = lambda_max((<alpha| (x) I) A (|alpha> (x) I)),
 * the exact maximum of f over the other factor. Then
 *   (1) |g(a) - g(a')| <= 2 ||A||_op ||a - a'||   (Weyl, and the pinning
 *       isometry V_a = |a> (x) I satisfies ||V_a - V_a'|| = ||a - a'||),
 *   (2) the chart map p -> alpha(p) has Jacobian columns of norm <= 1, so
 *       ||alpha(p) - alpha(q)|| <= sqrt(kg) ||p - q|| over the chart box,
 *       where kg = 2*min(M,N) - 2 is the enumerated chart dimension,
 *   (3) an axis step of at most h puts every chart point within
 *       (h/2) sqrt(kg) of a grid point.
 * Combining, max over all product states is at most
 *   grid_best + L*h  with  L = kg * max|eig(A)|,
 * where grid_best is the exact eigen-maximum over the enumerated grid (each
 * grid value is attained by an actual product state, so grid_best is also a
 * valid lower bound). Axis subdivisions are powers of two, so halving h
 * refines the grid in place and grid_best is monotone under refinement.
 */
#pragma once

#include <atomic>
#include <cstdlib>
#include <limits>
#include <optional>
#include <thread>
#include <vector>

#include "sepwit/states.hpp"

namespace sepwit {

enum class OracleStatus { CutReady, WitnessCertified, WitnessCandidate, Exhausted };

namespace tol_oracle {
// Numerical slop for the two early-halt comparisons. A cut only needs
// tr(A sigma) >= tr(A rho) up to hyperplane-shift noise, so CutReady fires at
// f_lower >= t - cut_slop; a witness certificate must clear a real margin,
// so WitnessCertified requires f_upper < t - cert_margin (protects exact
// boundary cases where f* == t and eigensolver rounding is +-1 ulp).
inline constexpr double cut_slop = 1e-12;
inline constexpr double cert_margin = 1e-10;
}  // namespace tol_oracle

inline const char* to_string(OracleStatus s) {
  switch (s) {
    case OracleStatus::CutReady: return "CutReady";
    case OracleStatus::WitnessCertified: return "WitnessCertified";
    case OracleStatus::WitnessCandidate: return "WitnessCandidate";
    case OracleStatus::Exhausted: return "Exhausted";
  }
  return "?";
}

enum class GridPolicy { Auto, Always, Never };

struct OracleOptions {
  int starts = 0;                      // 0 -> 8k
  int max_sweeps = 200;
  double ascent_tol = 1e-10;
  long max_evaluations = 50'000'000;   // see-saw evaluations + grid points
  GridPolicy grid_policy = GridPolicy::Auto;
  double grid_h = 0.0;                 // 0 -> auto (0.01 for kg=2, 0.1 for kg=4)
  int grid_k_max = 8;                  // certified backend available iff k <= this
  long max_grid_points = 80'000'000;
  int threads = 0;                     // 0 -> SEPWIT_THREADS env or hardware
  std::uint64_t seed = 0;
};

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SEPWIT_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// f(s) = <ab| A |ab> = tr(A |ab><ab|).
inline double evaluate(const HermitianOp& a, const ProductState& s) {
  require_same_dims(a.dims, s.dims, "evaluate");
  const Vector v = s.ket();
  return (v.adjoint() * a.mat * v)(0).real();
}

struct AscentResult {
  ProductState state;
  double value;
  long evaluations;
  int sweeps;
};

namespace detail {

/// One see-saw run. Each half-step replaces one factor by the top
/// eigenvector of the operator conditioned on the other factor, which is the
/// exact single-factor maximizer, so the value sequence is nondecreasing.
/// Optional early-halt threshold: stops as soon as the value reaches it.
inline AscentResult seesaw(const HermitianOp& a, ProductState s, double tol,
                           int max_sweeps, double halt_at,
                           long eval_budget) {
  double value = evaluate(a, s);
  long evals = 1;
  int sweeps = 0;
  while (sweeps < max_sweeps && value < halt_at && evals + 2 <= eval_budget) {
    const EigenPair ea = top_eigenpair(conditional_operator(a, s.beta));
    s.alpha = ea.vector;
    const EigenPair eb = top_eigenpair(conditional_operator_alpha(a, s.alpha));
    s.beta = eb.vector;
    ++sweeps;
    evals += 2;
    const double next = evaluate(a, s);
    const double improvement = next - value;
    value = std::max(value, next);
    if (improvement < tol) break;
  }
  return AscentResult{std::move(s), value, evals, sweeps};
}

/// Deterministic product projection of the top eigenvector of A: reshape
/// psi to the M x N matrix Psi, take the dominant left singular direction
/// via the tie-broken top eigenpair of Psi Psi^dag.
inline ProductState eigenvector_seed(const HermitianOp& a) {
  const int M = a.dims.M, N = a.dims.N;
  const EigenPair top = top_eigenpair(a.mat);
  Matrix psi(M, N);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < N; ++j) psi(i, j) = top.vector(i * N + j);
  if (psi.norm() < tol::unit_vector) {
    Vector a0 = Vector::Zero(M), b0 = Vector::Zero(N);
    a0(0) = 1.0;
    b0(0) = 1.0;
    return ProductState::from_vectors(a.dims, a0, b0);
  }
  const EigenPair left = top_eigenpair(Matrix(psi * psi.adjoint()));
  Vector beta = (psi.adjoint() * left.vector).conjugate();
  if (beta.norm() < tol::unit_vector) {
    beta = Vector::Zero(N);
    beta(0) = 1.0;
  }
  return ProductState::from_vectors(a.dims, left.vector, std::move(beta));
}

inline long pow2_subdivisions(double range, double h) {
  long n = 1;
  while (range / double(n) > h && n < (1L << 40)) n *= 2;
  return n;
}

}  // namespace detail

/// Monotone local ascent from a given start (the oracle's workhorse).
inline ProductState seesaw_ascent(const HermitianOp& a, const ProductState& start,
                                  double tol = 1e-10, int max_sweeps = 200) {
  require_same_dims(a.dims, start.dims, "seesaw_ascent");
  return detail::seesaw(a, start, tol, max_sweeps,
                        std::numeric_limits<double>::infinity(),
                        std::numeric_limits<long>::max())
      .state;
}

struct GridCertificate {
  double f_upper;     // grid_best + L*h, capped at lambda_max(A)
  double grid_best;   // exact eigen-maximum over the enumerated grid
  ProductState best;  // product state attaining grid_best
  long points;
  double lipschitz;   // the documented constant L = kg * max|eig(A)|
  double h;
};

/// Certified grid enumeration (see file header for the bound derivation).
/// Throws BudgetExhausted with a cost estimate when the grid would exceed
/// max_points.
inline GridCertificate grid_certify(const HermitianOp& a, double h,
                                    const OracleOptions& opts = {},
                                    long max_points = -1) {
  if (!(h > 0.0)) throw InputError("grid_certify: resolution must be positive");
  const Dims dims = a.dims;
  if (dims.k() > opts.grid_k_max) {
    throw InputError("grid_certify: k = " + std::to_string(dims.k()) +
                     " exceeds the configured maximum " + std::to_string(opts.grid_k_max));
  }
  if (max_points < 0) max_points = opts.max_grid_points;

  const bool enumerate_a = dims.M <= dims.N;
  const int d = enumerate_a ? dims.M : dims.N;
  const int kg = 2 * d - 2;

  // Axis layout: d-1 angle axes (closed [0, pi/2]), then d-1 phase axes
  // (periodic [0, 2pi)). Power-of-two subdivisions nest under halving h.
  std::vector<long> counts;
  std::vector<double> steps;
  long total = 1;
  for (int i = 0; i < d - 1; ++i) {
    const long n = detail::pow2_subdivisions(chart::half_pi, h);
    counts.push_back(n + 1);
    steps.push_back(chart::half_pi / double(n));
    total *= n + 1;
    if (total > max_points) break;
  }
  if (total <= max_points) {
    for (int i = 0; i < d - 1; ++i) {
      const long n = detail::pow2_subdivisions(chart::two_pi, h);
      counts.push_back(n);
      steps.push_back(chart::two_pi / double(n));
      if (total > max_points / n) {
        total = max_points + 1;
        break;
      }
      total *= n;
    }
  }
  if (total > max_points) {
    throw BudgetExhausted("grid_certify: resolution " + std::to_string(h) +
                          " needs more than " + std::to_string(max_points) +
                          " grid points on the " + std::to_string(kg) +
                          "-dimensional chart");
  }

  Eigen::SelfAdjointEigenSolver<Matrix> esa(a.mat, Eigen::EigenvaluesOnly);
  const double lam_max = esa.eigenvalues()(a.mat.rows() - 1);
  const double lam_absmax = std::max(std::abs(esa.eigenvalues()(0)), std::abs(lam_max));

  const auto value_at = [&](long flat, RealVector* params_out) -> double {
    RealVector p(kg);
    long rest = flat;
    for (int ax = kg - 1; ax >= 0; --ax) {
      const long idx = rest % counts[static_cast<std::size_t>(ax)];
      rest /= counts[static_cast<std::size_t>(ax)];
      p(ax) = double(idx) * steps[static_cast<std::size_t>(ax)];
    }
    if (params_out) *params_out = p;
    const Vector v = chart::to_vector(d, p);
    const Matrix cond = enumerate_a ? conditional_operator_alpha(a, v)
                                    : conditional_operator(a, v);
    Eigen::SelfAdjointEigenSolver<Matrix> es(cond, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(cond.rows() - 1);
  };

  const int nthreads = std::min<long>(resolve_threads(opts.threads), total);
  std::vector<std::pair<double, long>> chunk_best(
      static_cast<std::size_t>(nthreads),
      {-std::numeric_limits<double>::infinity(), -1});
  auto worker = [&](int which) {
    const long lo = total * which / nthreads;
    const long hi = total * (which + 1) / nthreads;
    double best = -std::numeric_limits<double>::infinity();
    long best_idx = -1;
    for (long flat = lo; flat < hi; ++flat) {
      const double v = value_at(flat, nullptr);
      if (v > best) {
        best = v;
        best_idx = flat;
      }
    }
    chunk_best[static_cast<std::size_t>(which)] = {best, best_idx};
  };
  if (nthreads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker, i);
    for (auto& th : pool) th.join();
  }
  // Deterministic reduction regardless of thread count: max value, then
  // lowest flat index.
  double grid_best = -std::numeric_limits<double>::infinity();
  long best_idx = -1;
  for (const auto& [v, idx] : chunk_best) {
    if (idx < 0) continue;
    if (v > grid_best || (v == grid_best && idx < best_idx)) {
      grid_best = v;
      best_idx = idx;
    }
  }

  // Rebuild the winning product state, other factor = exact top eigenvector.
  RealVector pbest;
  value_at(best_idx, &pbest);
  const Vector venum = chart::to_vector(d, pbest);
  const Matrix cond = enumerate_a ? conditional_operator_alpha(a, venum)
                                  : conditional_operator(a, venum);
  const EigenPair other = top_eigenpair(cond);
  ProductState best_state =
      enumerate_a ? ProductState::from_vectors(dims, venum, other.vector)
                  : ProductState::from_vectors(dims, other.vector, venum);

  const double lipschitz = double(kg) * lam_absmax;
  const double f_upper = std::min(grid_best + lipschitz * h, lam_max);
  return GridCertificate{f_upper, grid_best, std::move(best_state), total, lipschitz, h};
}

/// Oracle report. f_lower is the best evaluated value (attained by
/// `incumbent`); f_upper is a valid upper bound on the true maximum f*
/// (spectral by default, grid-certified when the grid ran).
struct OracleReport {
  ProductState incumbent;
  double f_lower;
  double f_upper;
  OracleStatus status;
  long evaluations;
  bool upper_certified;               // f_upper came from the grid backend
  std::optional<double> grid_best;
  double threshold;                   // the caller-supplied t
  double delta;
};

inline double auto_grid_h(const Dims& dims) {
  const int kg = 2 * std::min(dims.M, dims.N) - 2;
  return kg <= 2 ? 0.01 : 0.1;
}

/// Multistart see-saw with the paper-style early halts:
///   - CutReady the moment any evaluated value reaches t,
///   - WitnessCertified when a certified upper bound lands below t,
///   - otherwise WitnessCandidate (plan completed) or Exhausted (budget).
/// The default start plan is 8k starts: one seeded from the top eigenvector
/// of A (projected to the nearest product state), the rest uniform on the
/// chart box.
inline OracleReport maximize(const HermitianOp& a, double t, double delta,
                             const OracleOptions& opts = {}) {
  if (op_norm(a) > 1.0 + 1e-9) {
    throw InputError("maximize: test operator must lie in the unit ball (||A|| = " +
                     std::to_string(op_norm(a)) + ")");
  }
  if (opts.max_evaluations < 1) {
    throw BudgetExhausted("maximize: evaluation budget exhausted before any evaluation");
  }
  const Dims dims = a.dims;
  const int n_starts = opts.starts > 0 ? opts.starts : 8 * dims.k();
  std::mt19937_64 rng(opts.seed);

  Eigen::SelfAdjointEigenSolver<Matrix> es(a.mat, Eigen::EigenvaluesOnly);
  const double lam_max = es.eigenvalues()(a.mat.rows() - 1);

  OracleReport rep{detail::eigenvector_seed(a),
                   -std::numeric_limits<double>::infinity(),
                   lam_max,
                   OracleStatus::WitnessCandidate,
                   0,
                   false,
                   std::nullopt,
                   t,
                   delta};

  bool exhausted = false;
  for (int s = 0; s < n_starts; ++s) {
    if (rep.evaluations >= opts.max_evaluations) {
      exhausted = true;
      break;
    }
    ProductState start = (s == 0) ? detail::eigenvector_seed(a)
                                  : random_chart_point(dims, rng);
    AscentResult res = detail::seesaw(a, std::move(start), opts.ascent_tol,
                                      opts.max_sweeps, t - tol_oracle::cut_slop,
                                      opts.max_evaluations - rep.evaluations);
    rep.evaluations += res.evaluations;
    if (res.value > rep.f_lower) {
      rep.f_lower = res.value;
      rep.incumbent = res.state;
    }
    if (rep.f_lower >= t - tol_oracle::cut_slop) {
      rep.status = OracleStatus::CutReady;
      return rep;
    }
  }

  const bool want_grid = opts.grid_policy != GridPolicy::Never &&
                         dims.k() <= opts.grid_k_max && std::isfinite(t);
  if (want_grid && !exhausted) {
    const double h = opts.grid_h > 0.0 ? opts.grid_h : auto_grid_h(dims);
    const long room = opts.max_evaluations - rep.evaluations;
    try {
      GridCertificate gc =
          grid_certify(a, h, opts, std::min(room, opts.max_grid_points));
      rep.evaluations += gc.points;
      rep.grid_best = gc.grid_best;
      if (gc.grid_best > rep.f_lower) {
        rep.f_lower = gc.grid_best;
        rep.incumbent = gc.best;
      }
      rep.f_upper = std::min(rep.f_upper, gc.f_upper);
      rep.upper_certified = true;
      if (rep.f_lower >= t - tol_oracle::cut_slop) {
        rep.status = OracleStatus::CutReady;
        return rep;
      }
      if (rep.f_upper < t - tol_oracle::cert_margin) {
        rep.status = OracleStatus::WitnessCertified;
        return rep;
      }
    } catch (const BudgetExhausted&) {
      exhausted = true;  // grid too fine for what is left of the budget
    }
  }

  rep.status = exhausted ? OracleStatus::Exhausted : OracleStatus::WitnessCandidate;
  return rep;
}

}  // namespace sepwit
