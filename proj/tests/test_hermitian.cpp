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

#include "sepwit/basis.hpp"
#include "sepwit/hermitian.hpp"
#include "sepwit/states.hpp"

using namespace sepwit;
using Catch::Approx;

namespace {

// Independent trace: naive index loops, no shared code with the library path.
double naive_trace_product(const Matrix& x, const Matrix& y) {
  Complex s = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) s += x(i, j) * y(j, i);
  return s.real();
}

Matrix random_hermitian(Dims d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(d.mn(), d.mn());
  for (int i = 0; i < d.mn(); ++i)
    for (int j = 0; j < d.mn(); ++j) m(i, j) = Complex(g(rng), g(rng));
  return 0.5 * (m + m.adjoint().eval());
}

}  // namespace

TEST_CASE("dims bookkeeping") {
  Dims d22(2, 2);
  CHECK(d22.n() == 16);
  CHECK(d22.k() == 4);
  Dims d23(2, 3);
  CHECK(d23.n() == 36);
  CHECK(d23.k() == 6);
  Dims d33(3, 3);
  CHECK(d33.n() == 81);
  CHECK(d33.k() == 8);
  CHECK_THROWS_AS(Dims(1, 2), InputError);
  CHECK_THROWS_AS(Dims(2, 0), InputError);
}

TEST_CASE("basis: counts, identity element, orthonormality") {
  const auto b22 = build_basis(Dims(2, 2));
  REQUIRE(b22.elements.size() == 16);
  CHECK((b22.elements[0] - Matrix::Identity(4, 4) / 2.0).norm() == Approx(0.0).margin(1e-14));

  const auto b23 = build_basis(Dims(2, 3));
  REQUIRE(b23.elements.size() == 36);

  // Gram matrix = identity within 1e-12, traceless beyond element 0.
  for (std::size_t i = 0; i < b22.elements.size(); ++i) {
    for (std::size_t j = 0; j < b22.elements.size(); ++j) {
      const double g = trace_product(b22.elements[i], b22.elements[j]);
      CHECK(g == Approx(i == j ? 1.0 : 0.0).margin(1e-12));
    }
    if (i > 0) CHECK(std::abs(b22.elements[i].trace()) < 1e-13);
  }
  for (std::size_t i = 1; i < b23.elements.size(); ++i) {
    CHECK(std::abs(b23.elements[i].trace()) < 1e-13);
  }

  CHECK_THROWS_AS(build_basis(Dims(7, 6)), InputError);  // MN = 42 > 36
}

TEST_CASE("basis: coefficient round trip and isomorphism") {
  for (Dims d : {Dims(2, 2), Dims(2, 3)}) {
    const auto basis = build_basis(d);
    for (std::uint64_t seed : {7ULL, 8ULL, 9ULL}) {
      const HermitianOp x(d, random_hermitian(d, seed));
      const HermitianOp y(d, random_hermitian(d, seed + 100));
      const RealVector cx = basis.coeffs(x);
      const RealVector cy = basis.coeffs(y);
      const HermitianOp back = basis.from_coeffs(cx);
      CHECK((back.mat - x.mat).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(cx.squaredNorm() == Approx(x.mat.squaredNorm()).epsilon(1e-10));
      CHECK(inner(x, y) == Approx(cx.dot(cy)).margin(1e-10));
    }
  }
}

TEST_CASE("inner product examples") {
  const Dims d(2, 2);
  const HermitianOp half_id(d, Matrix::Identity(4, 4) / 2.0);
  CHECK(inner(half_id, half_id) == Approx(1.0));

  const DensityMatrix bell = bell_phi_plus();
  CHECK(inner(bell.op, bell.op) == Approx(1.0).margin(1e-12));  // purity

  const HermitianOp other(Dims(2, 3), Matrix::Identity(6, 6) / std::sqrt(6.0));
  CHECK_THROWS_AS(inner(half_id, other), InputError);
}

TEST_CASE("norm distance: frozen Bell value and homogeneity") {
  const DensityMatrix bell = bell_phi_plus();
  const DensityMatrix mm = maximally_mixed(Dims(2, 2));
  CHECK(norm_distance(bell.op, bell.op) == 0.0);

  // Independent oracle: naive trace of (P - I/4)^2 = 3/4.
  const Matrix diff = bell.mat() - mm.mat();
  CHECK(naive_trace_product(diff, diff) == Approx(0.75).margin(1e-12));
  CHECK(norm_distance(bell.op, mm.op) == Approx(0.8660254037844386).margin(1e-12));

  const Dims d(2, 2);
  const HermitianOp x(d, random_hermitian(d, 3));
  const HermitianOp zero(d, Matrix::Zero(4, 4));
  const HermitianOp x3(d, Matrix(3.0 * x.mat));
  CHECK(norm_distance(x3, zero) == Approx(3.0 * norm_distance(x, zero)).epsilon(1e-12));

  // Triangle inequality on sampled triples.
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const HermitianOp a(d, random_hermitian(d, 100 + rep));
    const HermitianOp b(d, random_hermitian(d, 200 + rep));
    const HermitianOp c(d, random_hermitian(d, 300 + rep));
    CHECK(norm_distance(a, c) <= norm_distance(a, b) + norm_distance(b, c) + 1e-12);
  }
}

TEST_CASE("partial transpose: Bell spectrum, involution, product positivity") {
  const DensityMatrix bell = bell_phi_plus();
  const HermitianOp pt = partial_transpose(bell.op, Subsystem::B);

  // Hand-built expectation: PT_B of |Phi+><Phi+| is SWAP/2.
  Matrix swap_half = Matrix::Zero(4, 4);
  swap_half(0, 0) = swap_half(3, 3) = 0.5;
  swap_half(1, 2) = swap_half(2, 1) = 0.5;
  CHECK((pt.mat - swap_half).cwiseAbs().maxCoeff() < 1e-14);

  Eigen::SelfAdjointEigenSolver<Matrix> es(pt.mat);
  CHECK(es.eigenvalues()(0) == Approx(-0.5).margin(1e-12));
  for (int i = 1; i < 4; ++i) CHECK(es.eigenvalues()(i) == Approx(0.5).margin(1e-12));

  for (Dims d : {Dims(2, 2), Dims(2, 3)}) {
    for (std::uint64_t seed : {5ULL, 6ULL}) {
      const HermitianOp x(d, random_hermitian(d, seed));
      const HermitianOp ptb = partial_transpose(x, Subsystem::B);
      const HermitianOp pta = partial_transpose(x, Subsystem::A);
      CHECK((partial_transpose(ptb, Subsystem::B).mat - x.mat).cwiseAbs().maxCoeff() < 1e-14);
      CHECK(ptb.trace() == Approx(x.trace()).margin(1e-12));
      CHECK(hermiticity_defect(pta.mat) < 1e-12);

      std::mt19937_64 rng(seed);
      const ProductState s = random_product_state(d, rng);
      const HermitianOp pts = partial_transpose(s.op(), Subsystem::B);
      CHECK(min_eigenvalue(pts.mat) > -1e-10);
    }
  }
}

TEST_CASE("conditional operator") {
  const Dims d(2, 2);
  Matrix z(2, 2), x(2, 2);
  z << 1, 0, 0, -1;
  x << 0, 1, 1, 0;
  Vector plus(2);
  plus << 1, 1;
  plus /= std::sqrt(2.0);

  const HermitianOp zz(d, kron(z, z));
  CHECK(conditional_operator(zz, plus).cwiseAbs().maxCoeff() < 1e-14);

  const HermitianOp ii(d, Matrix(kron(Matrix(Matrix::Identity(2, 2)), Matrix(Matrix::Identity(2, 2)))));
  Vector b(2);
  b << Complex(0.6, 0.0), Complex(0.0, 0.8);
  CHECK((conditional_operator(ii, b) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);

  const HermitianOp xx(d, kron(x, x));
  CHECK((conditional_operator(xx, plus) - x).cwiseAbs().maxCoeff() < 1e-12);

  // <a| C(A, b) |a> = tr(A |ab><ab|) on random inputs.
  for (Dims dd : {Dims(2, 2), Dims(2, 3), Dims(3, 3)}) {
    std::mt19937_64 rng(42);
    const HermitianOp a(dd, random_hermitian(dd, 17));
    for (int rep = 0; rep < 10; ++rep) {
      const ProductState s = random_product_state(dd, rng);
      const Matrix c = conditional_operator(a, s.beta);
      const double lhs = (s.alpha.adjoint() * c * s.alpha)(0).real();
      const Vector v = s.ket();
      const double rhs = (v.adjoint() * a.mat * v)(0).real();
      CHECK(lhs == Approx(rhs).margin(1e-10));
      const Matrix cb = conditional_operator_alpha(a, s.alpha);
      const double lhs2 = (s.beta.adjoint() * cb * s.beta)(0).real();
      CHECK(lhs2 == Approx(rhs).margin(1e-10));
    }
  }

  Vector not_unit(2);
  not_unit << 1.0, 1.0;
  CHECK_THROWS_AS(conditional_operator(zz, not_unit), InputError);
}

TEST_CASE("top eigenpair: examples, tie-breaks, residuals") {
  Matrix z(2, 2), x(2, 2);
  z << 1, 0, 0, -1;
  x << 0, 1, 1, 0;

  const EigenPair pz = top_eigenpair(z);
  CHECK(pz.value == Approx(1.0));
  CHECK(std::abs(pz.vector(0) - Complex(1, 0)) < 1e-12);
  CHECK(std::abs(pz.vector(1)) < 1e-12);

  // Fully degenerate: lowest-index standard-basis alignment picks e_0.
  const EigenPair pi = top_eigenpair(Matrix(Matrix::Identity(3, 3)));
  CHECK(pi.value == Approx(1.0));
  CHECK(std::abs(pi.vector(0) - Complex(1, 0)) < 1e-12);

  const EigenPair px = top_eigenpair(x);
  CHECK(px.value == Approx(1.0));
  CHECK(px.vector(0).real() == Approx(1.0 / std::sqrt(2.0)).margin(1e-12));
  CHECK(px.vector(1).real() == Approx(1.0 / std::sqrt(2.0)).margin(1e-12));

  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const Matrix h = random_hermitian(Dims(2, 3), seed);
    const EigenPair p = top_eigenpair(h);
    CHECK((h * p.vector - p.value * p.vector).norm() < 1e-9);
    CHECK(p.vector.norm() == Approx(1.0).margin(1e-12));
    // Gauge: first nonzero component real nonnegative.
    for (Eigen::Index i = 0; i < p.vector.size(); ++i) {
      if (std::abs(p.vector(i)) > 1e-12) {
        CHECK(p.vector(i).imag() == Approx(0.0).margin(1e-12));
        CHECK(p.vector(i).real() >= 0.0);
        break;
      }
    }
  }

  Matrix bad(2, 2);
  bad << 0, 1, 0, 0;
  CHECK_THROWS_AS(top_eigenpair(bad), InputError);
}

TEST_CASE("validation of operator and state wrappers") {
  Matrix bad(4, 4);
  bad.setZero();
  bad(0, 1) = Complex(0, 1);  // not Hermitian
  CHECK_THROWS_AS(HermitianOp(Dims(2, 2), bad), InputError);

  CHECK_THROWS_AS(DensityMatrix(HermitianOp(Dims(2, 2), Matrix(2.0 * Matrix::Identity(4, 4)))),
                  InputError);

  Matrix neg = Matrix::Identity(4, 4);
  neg(3, 3) = -0.5;
  neg /= neg.trace().real();
  CHECK_THROWS_AS(DensityMatrix(HermitianOp(Dims(2, 2), neg)), InputError);
}
