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

#include "sepwit/partial_info.hpp"
#include "sepwit/verifiers.hpp"

using namespace sepwit;
using Catch::Approx;

namespace {

Matrix pauli(char c) {
  Matrix m(2, 2);
  switch (c) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

HermitianOp pauli_pair(char a, char b) {
  return HermitianOp(Dims(2, 2), kron(pauli(a), pauli(b)));
}

}  // namespace

TEST_CASE("add measurement: identity, duplicates, bounds, inconsistency") {
  MeasurementSet ms = MeasurementSet::create(Dims(2, 2));
  CHECK(ms.j() == 0);

  // Trace constraint as an explicit observable.
  const HermitianOp id_norm(Dims(2, 2), Matrix(Matrix::Identity(4, 4) / 2.0));
  ms = add_measurement(ms, id_norm, 0.5);
  CHECK(ms.j() == 1);

  // Dependent duplicate with a consistent value: j unchanged, no error.
  ms = add_measurement(ms, pauli_pair('Z', 'Z'), 1.0);
  CHECK(ms.j() == 2);
  ms = add_measurement(ms, pauli_pair('Z', 'Z'), 1.0);
  CHECK(ms.j() == 2);

  // Value beyond the spectral bound of ZZ.
  CHECK_THROWS_AS(add_measurement(ms, pauli_pair('X', 'X'), 1.5), InputError);

  // Dependent duplicate with a contradicting value.
  CHECK_THROWS_AS(add_measurement(ms, pauli_pair('Z', 'Z'), 0.2),
                  MeasurementInconsistency);

  // Orthonormal bookkeeping.
  CHECK((ms.ortho.transpose() * ms.ortho - RealMatrix::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
}

TEST_CASE("subspace solve: Bell correlations detect entanglement in span") {
  // Expected values of the Bell state |Phi+>: <XX> = 1, <YY> = -1, <ZZ> = 1.
  MeasurementSet ms = MeasurementSet::create(Dims(2, 2));
  ms = add_measurement(ms, pauli_pair('X', 'X'), 1.0);
  ms = add_measurement(ms, pauli_pair('Y', 'Y'), -1.0);
  ms = add_measurement(ms, pauli_pair('Z', 'Z'), 1.0);

  SolverConfig cfg;
  cfg.seed = 3;
  const SubspaceVerdict v = subspace_solve(ms, 0.01, cfg);
  REQUIRE(v.kind == SubspaceKind::ENTANGLED);
  REQUIRE(v.witness.has_value());
  CHECK(v.witness->certified);
  CHECK(v.witness->margin > 0.0);

  // Witness supported in span{XX, YY, ZZ}: coefficients vanish outside.
  const auto basis = OperatorBasis::build(Dims(2, 2));
  RealMatrix span(16, 3);
  span.col(0) = basis.coeffs(pauli_pair('X', 'X')) / 2.0;
  span.col(1) = basis.coeffs(pauli_pair('Y', 'Y')) / 2.0;
  span.col(2) = basis.coeffs(pauli_pair('Z', 'Z')) / 2.0;
  const RealVector w = v.witness->coeffs;
  const RealVector outside = w - span * (span.transpose() * w);
  CHECK(outside.cwiseAbs().maxCoeff() <= 1e-10);

  // Soundness against the full state: the span witness is a real witness
  // for every completion of the measured values; check the known one.
  const ValidationResult val = validate_witness(v.witness->op, bell_phi_plus(), 0.01);
  CHECK(val.level == WitnessValidity::ValidCertified);

  // The combination over the original observables reproduces the witness.
  Matrix recon = Matrix::Zero(4, 4);
  recon += v.observable_combination(0) * pauli_pair('X', 'X').mat;
  recon += v.observable_combination(1) * pauli_pair('Y', 'Y').mat;
  recon += v.observable_combination(2) * pauli_pair('Z', 'Z').mat;
  recon += v.identity_offset * Matrix::Identity(4, 4);
  CHECK((recon - v.witness->op.mat).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("subspace solve: single ZZ value is inconclusive") {
  MeasurementSet ms = MeasurementSet::create(Dims(2, 2));
  ms = add_measurement(ms, pauli_pair('Z', 'Z'), 1.0);
  SolverConfig cfg;
  cfg.seed = 9;
  const SubspaceVerdict v = subspace_solve(ms, 0.01, cfg);
  CHECK(v.kind == SubspaceKind::INCONCLUSIVE);
}

TEST_CASE("subspace solve: full basis matches the full solver") {
  const DensityMatrix bell = bell_phi_plus();
  const auto basis = OperatorBasis::build(Dims(2, 2));
  MeasurementSet ms = MeasurementSet::create(Dims(2, 2));
  for (int l = 0; l < 16; ++l) {
    const HermitianOp obs(Dims(2, 2), basis.elements[static_cast<std::size_t>(l)]);
    ms = add_measurement(ms, obs, inner(obs, bell.op));
  }
  CHECK(ms.j() == 16);

  SolverConfig cfg;
  cfg.seed = 21;
  const SubspaceVerdict sub = subspace_solve(ms, 0.01, cfg);
  const Verdict full = solve(bell, 0.01, cfg);
  CHECK(sub.kind == SubspaceKind::ENTANGLED);
  CHECK(full.kind == VerdictKind::ENTANGLED);
}

TEST_CASE("subspace solve: monotone under measurement supersets") {
  // If {XX, YY} already certifies entanglement, adding ZZ keeps the verdict.
  MeasurementSet ms = MeasurementSet::create(Dims(2, 2));
  ms = add_measurement(ms, pauli_pair('X', 'X'), 1.0);
  ms = add_measurement(ms, pauli_pair('Y', 'Y'), -1.0);
  SolverConfig cfg;
  cfg.seed = 33;
  const SubspaceVerdict v2 = subspace_solve(ms, 0.01, cfg);
  if (v2.kind == SubspaceKind::ENTANGLED) {
    MeasurementSet ms3 = add_measurement(ms, pauli_pair('Z', 'Z'), 1.0);
    const SubspaceVerdict v3 = subspace_solve(ms3, 0.01, cfg);
    CHECK(v3.kind == SubspaceKind::ENTANGLED);
  }

  // Separable-compatible values never certify, with or without supersets.
  MeasurementSet sep = MeasurementSet::create(Dims(2, 2));
  sep = add_measurement(sep, pauli_pair('Z', 'Z'), 1.0);
  sep = add_measurement(sep, pauli_pair('Z', 'I'), 1.0);
  const SubspaceVerdict vs = subspace_solve(sep, 0.01, cfg);
  CHECK(vs.kind == SubspaceKind::INCONCLUSIVE);
}

TEST_CASE("subspace solve: empty set rejected, identity-only is inconclusive") {
  MeasurementSet ms = MeasurementSet::create(Dims(2, 2));
  CHECK_THROWS_AS(subspace_solve(ms, 0.01), InputError);

  const HermitianOp id_norm(Dims(2, 2), Matrix(Matrix::Identity(4, 4) / 2.0));
  ms = add_measurement(ms, id_norm, 0.5);
  const SubspaceVerdict v = subspace_solve(ms, 0.01);
  CHECK(v.kind == SubspaceKind::INCONCLUSIVE);
  CHECK(v.termination == "no-traceless-span");
}
