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

#include <catch2/catch_amalgamated.hpp>

#include "sepwit/cutting_plane.hpp"
#include "sepwit/verifiers.hpp"

using namespace sepwit;
using Catch::Approx;

namespace {

std::shared_ptr<const OperatorBasis> basis22() {
  static auto b = std::make_shared<const OperatorBasis>(OperatorBasis::build(Dims(2, 2)));
  return b;
}

HermitianOp unit_traceless_from_seed(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  RealVector c(16);
  for (Eigen::Index i = 0; i < 16; ++i) c(i) = g(rng);
  c(0) = 0.0;
  c /= c.norm();
  return basis22()->from_coeffs(c);
}

}  // namespace

TEST_CASE("initial cut: formula, normalization, error path") {
  const DensityMatrix bell = bell_phi_plus();
  const HermitianOp k1 = initial_cut(bell);
  CHECK(op_norm(k1) == Approx(1.0).margin(1e-12));
  CHECK(k1.trace() == Approx(0.0).margin(1e-12));
  // K1 = (P - I/4)/(sqrt(3)/2)
  const Matrix expect = (bell.mat() - Matrix::Identity(4, 4) / 4.0) / 0.8660254037844386;
  CHECK((k1.mat - expect).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(initial_cut(maximally_mixed(Dims(2, 2))), InputError);

  for (std::uint64_t seed : {31ULL, 32ULL}) {
    const DensityMatrix rho = random_state(Dims(2, 3), seed);
    const HermitianOp k = initial_cut(rho);
    CHECK(k.trace() == Approx(0.0).margin(1e-12));
  }
}

TEST_CASE("make cut: orthogonality, witness side, unit denominator") {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 10; ++rep) {
    const DensityMatrix rho = random_state(Dims(2, 2), 600 + static_cast<std::uint64_t>(rep));
    const HermitianOp a = unit_traceless_from_seed(700 + static_cast<std::uint64_t>(rep));
    // Find a product state with tr(A sigma) >= tr(A rho) so the cut is valid.
    OracleOptions opts;
    opts.seed = rep;
    const double t = inner(a, rho.op);
    const OracleReport r = maximize(a, t, 0.01, opts);
    if (r.status != OracleStatus::CutReady) continue;
    const HermitianOp k = make_cut(a, rho, r.incumbent);
    CHECK(inner(k, a) == Approx(0.0).margin(1e-10));
    CHECK(k.trace() == Approx(0.0).margin(1e-10));
    CHECK(op_norm(k) == Approx(1.0).margin(1e-12));
  }

  // Planted PPT-negative states: cuts keep the PPT witness strictly feasible.
  int checked = 0;
  for (std::uint64_t seed = 900; checked < 5; ++seed) {
    const DensityMatrix rho = random_state(Dims(2, 2), seed);
    const PptReport pr = ppt_test(rho);
    if (pr.verdict != PptVerdict::PPT_NEGATIVE || pr.min_eigenvalue > -0.05) continue;
    ++checked;
    const HermitianOp w = ppt_witness(rho);
    const HermitianOp a = initial_cut(rho);
    OracleOptions opts;
    opts.seed = seed;
    const OracleReport r = maximize(a, inner(a, rho.op), 0.01, opts);
    if (r.status != OracleStatus::CutReady) continue;
    const HermitianOp k = make_cut(a, rho, r.incumbent);
    CHECK(inner(k, w) > 0.0);
  }

  // tr(A^2) = 1: the cut is the normalized A-orthogonal component.
  const DensityMatrix rho = random_state(Dims(2, 2), 1234);
  const HermitianOp a = unit_traceless_from_seed(55);
  OracleOptions opts;
  opts.seed = 3;
  const OracleReport r = maximize(a, inner(a, rho.op), 0.01, opts);
  REQUIRE(r.status == OracleStatus::CutReady);
  const Matrix diff = rho.mat() - r.incumbent.op_matrix();
  Matrix expected = diff - trace_product(a.mat, diff) * a.mat;
  expected /= expected.norm();
  const HermitianOp k = make_cut(a, rho, r.incumbent);
  CHECK((k.mat - expected).cwiseAbs().maxCoeff() < 1e-10);

  // Degenerate direction: rho - sigma parallel to A (signed so that the cut
  // precondition tr(A sigma) >= tr(A rho) holds).
  const DensityMatrix mm = maximally_mixed(Dims(2, 2));
  Vector e0 = Vector::Zero(2);
  e0(0) = 1;
  const ProductState s00 = ProductState::from_vectors(Dims(2, 2), e0, e0);
  Matrix par = s00.op_matrix() - mm.mat();
  const HermitianOp apar(Dims(2, 2), Matrix(par / par.norm()));
  CHECK_THROWS_AS(make_cut(apar, mm, s00), DegenerateCut);
}

TEST_CASE("analytic center: closed forms for 0, 1, 2 cuts") {
  CutSet cs(basis22());

  // Zero cuts: center = 0.
  const HermitianOp zero_warm(Dims(2, 2), Matrix(Matrix::Zero(4, 4)));
  const HermitianOp c0 = analytic_center(cs, zero_warm);
  CHECK(op_norm(c0) <= 1e-10);

  // One cut: C = K1 / sqrt(3).
  const HermitianOp k1 = unit_traceless_from_seed(77);
  cs.add(k1);
  const HermitianOp warm1(Dims(2, 2), Matrix(0.5 * k1.mat));
  const HermitianOp c1 = analytic_center(cs, warm1);
  CHECK(norm_distance(c1, HermitianOp(Dims(2, 2), Matrix(k1.mat / std::sqrt(3.0)))) < 1e-6);

  // Two orthonormal cuts: C = (K1 + K2)/2.
  HermitianOp k2raw = unit_traceless_from_seed(78);
  Matrix k2m = k2raw.mat - inner(k2raw, k1) * k1.mat;
  k2m /= k2m.norm();
  const HermitianOp k2(Dims(2, 2), k2m);
  cs.add(k2);
  const HermitianOp warm2(Dims(2, 2), Matrix(0.3 * (k1.mat + k2.mat)));
  const HermitianOp c2 = analytic_center(cs, warm2);
  CHECK(norm_distance(c2, HermitianOp(Dims(2, 2), Matrix(0.5 * (k1.mat + k2.mat)))) < 1e-6);

  // Gradient at the returned center meets the tolerance.
  REQUIRE(cs.center_coords.has_value());
  const BarrierEval be = barrier_eval(cs.cuts, *cs.center_coords);
  CHECK(be.gradient.norm() <= 1e-8);

  // Infeasible warm start is rejected.
  const HermitianOp bad_warm(Dims(2, 2), Matrix(-0.5 * k1.mat));
  CHECK_THROWS_AS(analytic_center(cs, bad_warm), InputError);
  CHECK_THROWS_AS(cs.add(HermitianOp(Dims(2, 2), Matrix(0.5 * k1.mat))), InputError);
}

TEST_CASE("analytic center: stationarity expresses C as a positive cut combination") {
  CutSet cs(basis22());
  std::vector<HermitianOp> cuts;
  HermitianOp prev = unit_traceless_from_seed(101);
  cs.add(prev);
  cuts.push_back(prev);
  HermitianOp warm(Dims(2, 2), Matrix(0.5 * prev.mat));
  for (std::uint64_t seed = 102; seed < 107; ++seed) {
    const HermitianOp c = analytic_center(cs, warm);
    const double q = 1.0 - cs.center_coords->squaredNorm();
    RealVector combo = RealVector::Zero(15);
    for (int i = 0; i < cs.count(); ++i) {
      const double slack = cs.cuts.col(i).dot(*cs.center_coords);
      CHECK(slack > 0.0);
      const double coeff = q / (2.0 * slack);
      CHECK(coeff > 0.0);
      combo += coeff * cs.cuts.col(i);
    }
    CHECK((combo - *cs.center_coords).norm() < 1e-6);

    // Next random cut through the current center (orthogonal to it).
    HermitianOp next = unit_traceless_from_seed(seed * 13);
    Matrix m = next.mat - (inner(next, c) / inner(c, c)) * c.mat;
    m /= m.norm();
    const HermitianOp k(Dims(2, 2), m);
    warm = HermitianOp(Dims(2, 2), Matrix(c.mat + 0.05 * k.mat));
    cs.add(k);
  }
}

TEST_CASE("solve: interior, Bell, werner band") {
  SolverConfig cfg;
  cfg.seed = 12;

  const Verdict vm = solve(maximally_mixed(Dims(2, 2)), 0.01, cfg);
  CHECK(vm.kind == VerdictKind::SEPARABLE);
  CHECK(vm.termination == "maximally-mixed");
  REQUIRE(vm.decomposition.has_value());
  CHECK(norm_distance(mix(*vm.decomposition).op, maximally_mixed(Dims(2, 2)).op) < 0.01);

  const Verdict vb = solve(bell_phi_plus(), 0.01, cfg);
  CHECK(vb.kind == VerdictKind::ENTANGLED);
  REQUIRE(vb.witness.has_value());
  CHECK(vb.witness->certified);
  CHECK(vb.witness->margin > 0.0);
  CHECK(ppt_test(bell_phi_plus()).verdict == PptVerdict::PPT_NEGATIVE);
  CHECK(std::abs(vb.witness->op.trace()) < 1e-9);
  CHECK(op_norm(vb.witness->op) <= 1.0 + 1e-9);

  const Verdict v05 = solve(werner(0.5), 0.01, cfg);
  CHECK(v05.kind == VerdictKind::ENTANGLED);
  const Verdict v02 = solve(werner(0.2), 0.01, cfg);
  CHECK(v02.kind == VerdictKind::SEPARABLE);
  if (v02.decomposition) {
    CHECK(norm_distance(mix(*v02.decomposition).op, werner(0.2).op) <= 0.01 + 1e-12);
  }
}

TEST_CASE("solve: near-product shortcut and input validation") {
  // A pure product state is its own separability certificate.
  Vector a(2), b(2);
  a << 1, 0;
  b << std::sqrt(0.5), std::sqrt(0.5);
  const ProductState s = ProductState::from_vectors(Dims(2, 2), a, b);
  const DensityMatrix rho(s.op());
  SolverConfig cfg;
  cfg.seed = 4;
  const Verdict v = solve(rho, 0.01, cfg);
  CHECK(v.kind == VerdictKind::SEPARABLE);
  REQUIRE(v.decomposition.has_value());
  CHECK(norm_distance(mix(*v.decomposition).op, rho.op) <= 0.01);

  CHECK_THROWS_AS(solve(rho, 0.0, cfg), InputError);
  CHECK_THROWS_AS(solve(rho, -1.0, cfg), InputError);
}

TEST_CASE("solve: oracle budget propagates as exhaustion") {
  SolverConfig cfg;
  cfg.seed = 5;
  cfg.max_oracle_calls = 2;
  cfg.fw_budget = 0;
  CHECK_THROWS_AS(solve(random_state(Dims(2, 2), 77), 0.01, cfg), BudgetExhausted);
}

TEST_CASE("solve: determinism and decision stability under perturbation") {
  const DensityMatrix rho = random_state(Dims(2, 2), 4242);
  SolverConfig cfg;
  cfg.seed = 99;
  const Verdict v1 = solve(rho, 0.01, cfg);
  const Verdict v2 = solve(rho, 0.01, cfg);
  CHECK(v1.kind == v2.kind);
  CHECK(v1.oracle_calls == v2.oracle_calls);
  CHECK(v1.iterations == v2.iterations);

  // Perturb by 1e-9 in a random traceless direction: verdict unchanged
  // (state is far from the PPT boundary).
  const PptReport pr = ppt_test(rho);
  REQUIRE(std::abs(pr.min_eigenvalue) > 0.02);
  const HermitianOp dir = unit_traceless_from_seed(31337);
  const DensityMatrix rho2(
      HermitianOp(Dims(2, 2), Matrix(rho.mat() + 1e-9 * dir.mat)));
  const Verdict v3 = solve(rho2, 0.01, cfg);
  CHECK(v3.kind == v1.kind);
}

TEST_CASE("solve: witness ball invariants and call cap on a small sweep") {
  int found = 0;
  for (std::uint64_t seed = 2100; found < 6; ++seed) {
    const DensityMatrix rho = random_state(Dims(2, 2), seed);
    const PptReport pr = ppt_test(rho);
    if (std::abs(pr.min_eigenvalue) < 0.05) continue;
    ++found;
    SolverConfig cfg;
    cfg.seed = seed;
    const Verdict v = solve(rho, 0.01, cfg);
    CHECK(v.oracle_calls <= 50 * 16);
    CHECK(v.max_center_grad_norm <= 1e-8);
    CHECK((v.kind == VerdictKind::ENTANGLED) ==
          (pr.verdict == PptVerdict::PPT_NEGATIVE));
    if (v.witness) {
      CHECK(std::abs(v.witness->op.trace()) < 1e-9);
      CHECK(op_norm(v.witness->op) <= 1.0 + 1e-9);
      CHECK(v.witness->margin > -1e-8);
    }
  }
}
