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
 * @file partial_info.hpp
 * Witness search from partial knowledge: only j < n expected values of
 * orthonormalized observables are known, and the cutting-plane loop runs in
 * their span. tr(A rho) is computable from the measured values alone for
 * any A in the span, while the oracle still maximizes over all pure product
 * states, so an ENTANGLED verdict is sound for every completion of rho.
 * Without full information separability can never be asserted, so the other
 * outcome is INCONCLUSIVE (the measured values are consistent with a
 * separable state). The trace functional tr(rho) = 1 is treated as
 * implicitly measured.
 */
#pragma once

#include "sepwit/cutting_plane.hpp"

namespace sepwit {

struct MeasurementEntry {
  HermitianOp observable;  // as supplied
  double value;
};

/// Measured expected values with internal orthonormalization bookkeeping.
/// Immutable; add_measurement returns a new value.
struct MeasurementSet {
  std::shared_ptr<const OperatorBasis> basis;
  std::vector<MeasurementEntry> entries;
  RealMatrix ortho;         // n x j orthonormal coefficient columns
  RealVector ortho_values;  // expected values of the orthonormalized observables

  static MeasurementSet create(Dims dims) {
    auto basis = std::make_shared<const OperatorBasis>(OperatorBasis::build(dims));
    return MeasurementSet{basis, {}, RealMatrix(dims.n(), 0), RealVector(0)};
  }

  const Dims& dims() const { return basis->dims; }
  int j() const { return static_cast<int>(entries.size()); }
};

/// Ingest one expected value. Near-dependent observables (projection
/// residual below 1e-8) are merged: the value must agree with the implied
/// one, otherwise a MeasurementInconsistency is raised. Values outside the
/// observable's spectral range are rejected.
inline MeasurementSet add_measurement(const MeasurementSet& ms, const HermitianOp& x,
                                      double value) {
  require_same_dims(ms.dims(), x.dims, "add_measurement");
  Eigen::SelfAdjointEigenSolver<Matrix> es(x.mat, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  const double lmax = es.eigenvalues()(x.mat.rows() - 1);
  const double spec_tol = 1e-9 * std::max(1.0, op_norm(x));
  if (value < lmin - spec_tol || value > lmax + spec_tol) {
    throw InputError("add_measurement: expected value " + std::to_string(value) +
                     " outside the spectral range [" + std::to_string(lmin) + ", " +
                     std::to_string(lmax) + "]");
  }

  const RealVector c = ms.basis->coeffs(x);
  const RealVector proj = ms.ortho.transpose() * c;
  RealVector r = c - ms.ortho * proj;
  r -= ms.ortho * (ms.ortho.transpose() * r);  // reorthogonalize
  const double rn = r.norm();

  if (rn < tol::dependent_residual * std::max(1.0, c.norm())) {
    const double implied = proj.dot(ms.ortho_values);
    const double cons_tol = 1e-6 * std::max(1.0, op_norm(x));
    if (std::abs(value - implied) > cons_tol) {
      throw MeasurementInconsistency(
          "add_measurement: dependent observable implies expected value " +
          std::to_string(implied) + " but " + std::to_string(value) + " was given");
    }
    return ms;  // consistent duplicate; j unchanged
  }

  MeasurementSet out = ms;
  out.entries.push_back({x, value});
  out.ortho.conservativeResize(Eigen::NoChange, ms.ortho.cols() + 1);
  out.ortho.col(ms.ortho.cols()) = r / rn;
  out.ortho_values.conservativeResize(ms.ortho_values.size() + 1);
  // tr((X - sum_k proj_k B_k) rho) / ||r|| from linearity of the trace.
  out.ortho_values(ms.ortho_values.size()) = (value - proj.dot(ms.ortho_values)) / rn;
  return out;
}

enum class SubspaceKind { ENTANGLED, INCONCLUSIVE };

struct SubspaceVerdict {
  SubspaceKind kind;
  std::optional<WitnessInfo> witness;
  RealVector observable_combination;  // witness = sum_i d_i X_i + identity_offset * I
  double identity_offset = 0.0;
  long oracle_calls = 0;
  std::vector<IterationRecord> trace;
  std::string termination;
  int iterations = 0;
  double max_center_grad_norm = 0.0;
};

/// Run the cutting-plane search restricted to traceless operators in the
/// measured span. ENTANGLED carries a witness supported in the span;
/// INCONCLUSIVE means no witness was found there.
inline SubspaceVerdict subspace_solve(const MeasurementSet& ms, double delta,
                                      const SolverConfig& config = {}) {
  if (ms.entries.empty()) {
    throw InputError("subspace_solve: no measurements ingested");
  }
  if (!(delta > 0.0)) throw InputError("subspace_solve: delta must be positive");
  const Dims dims = ms.dims();
  const int n = dims.n();
  const double id_value = 1.0 / std::sqrt(double(dims.mn()));  // tr(B_0 rho)

  // Witness space: measured span plus the implicit identity, minus the
  // identity direction. Columns keep value bookkeeping through the
  // orthonormalization.
  RealMatrix span(n, 0);
  RealVector values(0);
  for (Eigen::Index jcol = 0; jcol < ms.ortho.cols(); ++jcol) {
    RealVector col = ms.ortho.col(jcol);
    double val = ms.ortho_values(jcol);
    val -= col(0) * id_value;
    col(0) = 0.0;
    const RealVector proj = span.transpose() * col;
    col -= span * proj;
    col -= span * (span.transpose() * col);
    val -= proj.dot(values);
    const double cn = col.norm();
    if (cn < 1e-10) continue;
    span.conservativeResize(Eigen::NoChange, span.cols() + 1);
    span.col(span.cols() - 1) = col / cn;
    values.conservativeResize(values.size() + 1);
    values(values.size() - 1) = val / cn;
  }

  SubspaceVerdict v{SubspaceKind::INCONCLUSIVE, std::nullopt, RealVector(ms.j())};
  v.observable_combination.setZero();
  if (span.cols() == 0) {
    v.termination = "no-traceless-span";
    return v;
  }

  detail::EngineConfig ecfg;
  ecfg.delta = delta;
  const double logterm = std::max(1.0, std::log(1.0 / delta));
  ecfg.max_iterations = std::max<long>(
      8, static_cast<long>(std::ceil(config.cap_factor * double(n) * logterm)));
  ecfg.max_oracle_calls = config.max_oracle_calls > 0 ? config.max_oracle_calls : 50L * n;
  ecfg.oracle_starts = config.oracle_starts;
  ecfg.grid_h = config.grid_h;
  ecfg.grid_h_min = config.grid_h_min;
  ecfg.stall_probes = config.stall_probes;
  ecfg.record_cuts = config.record_cuts;
  ecfg.seed = config.seed;
  ecfg.grid_k_max = config.grid_k_max;
  ecfg.threads = config.threads;
  ecfg.max_evaluations_per_call = config.max_evaluations_per_call;
  ecfg.match_tol = delta;
  const bool grid_available = dims.k() <= config.grid_k_max;
  ecfg.heuristic_witness =
      config.validation == ValidationPolicy::Heuristic ||
      (config.validation == ValidationPolicy::Auto && !grid_available);

  const detail::WitnessSpace space{ms.basis, span, values};
  detail::EngineOutcome outcome = detail::run_cutting_plane(space, ecfg);

  v.oracle_calls = outcome.oracle_calls;
  v.trace = std::move(outcome.trace);
  v.iterations = outcome.iterations;
  v.max_center_grad_norm = outcome.max_center_grad_norm;

  switch (outcome.reason) {
    case detail::StopReason::WitnessFound: {
      v.kind = SubspaceKind::ENTANGLED;
      const RealVector coeffs = ms.basis->coeffs(*outcome.witness);
      v.witness = WitnessInfo{std::move(*outcome.witness), outcome.witness_margin,
                              outcome.witness_certified, coeffs};
      v.termination = outcome.witness_certified ? "witness-certified" : "witness-heuristic";
      // Express the witness over the original observables (least squares on
      // their traceless projections; the identity offset absorbs the rest).
      if (ms.j() > 0) {
        RealMatrix c(n, ms.j());
        for (int i = 0; i < ms.j(); ++i) {
          RealVector ci = ms.basis->coeffs(ms.entries[static_cast<std::size_t>(i)].observable);
          ci(0) = 0.0;
          c.col(i) = ci;
        }
        v.observable_combination = c.colPivHouseholderQr().solve(coeffs);
        double id_part = 0.0;
        for (int i = 0; i < ms.j(); ++i) {
          id_part += v.observable_combination(i) *
                     ms.basis->coeffs(ms.entries[static_cast<std::size_t>(i)].observable)(0);
        }
        v.identity_offset = -id_part / std::sqrt(double(dims.mn()));
      }
      return v;
    }
    case detail::StopReason::MeasurementsMatched:
      v.termination = "consistent-separable-state";
      return v;
    case detail::StopReason::RegionCollapsed:
      v.termination = "region-collapsed";
      return v;
    case detail::StopReason::IterationCap:
      v.termination = "iteration-cap";
      return v;
    case detail::StopReason::Stalled:
      v.termination = "no-certifiable-witness";
      return v;
    case detail::StopReason::OracleBudget:
      throw BudgetExhausted("subspace_solve: oracle budget exhausted after " +
                            std::to_string(outcome.iterations) + " iterations");
  }
  return v;
}

}  // namespace sepwit
