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
 * @file hermitian.hpp
 * Real-vector-space view of Hermitian operators on C^M (x) C^N: inner
 * product, norm/distance, tensor helpers, partial transpose, conditional
 * (single-factor) contractions and deterministic top-eigenpair extraction.
 *
 * Everything here is value-semantic and immutable after construction; all
 * operations are pure functions and safe for concurrent read-only use.
 */
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cmath>

#include "sepwit/types.hpp"

namespace sepwit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Max-entry deviation from Hermiticity.
inline double hermiticity_defect(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// An element of the n-dimensional real space of Hermitian operators on
/// C^M (x) C^N. The matrix is symmetrized on construction; inputs further
/// than eps from Hermitian are rejected.
struct HermitianOp {
  Dims dims;
  Matrix mat;

  HermitianOp(Dims d, Matrix m, double eps = tol::hermiticity)
      : dims(d), mat(std::move(m)) {
    if (mat.rows() != dims.mn() || mat.cols() != dims.mn()) {
      throw InputError("HermitianOp: matrix must be " + std::to_string(dims.mn()) +
                       "x" + std::to_string(dims.mn()) + " for dims " + dims.str());
    }
    const double defect = hermiticity_defect(mat);
    if (!(defect <= eps)) {
      throw InputError("HermitianOp: matrix is not Hermitian (max-entry defect " +
                       std::to_string(defect) + ")");
    }
    mat = 0.5 * (mat + mat.adjoint().eval());
  }

  double trace() const { return mat.trace().real(); }
};

/// tr(XY) for Hermitian X, Y given as raw matrices (no dims checks).
inline double trace_product(const Matrix& x, const Matrix& y) {
  // tr(XY) = sum_ij X_ij conj(Y_ij) when Y is Hermitian.
  return x.cwiseProduct(y.conjugate()).sum().real();
}

/// Euclidean inner product <X,Y> = tr(XY).
inline double inner(const HermitianOp& x, const HermitianOp& y) {
  require_same_dims(x.dims, y.dims, "inner");
  return trace_product(x.mat, y.mat);
}

/// Frobenius norm ||X|| = sqrt(tr(X^2)).
inline double op_norm(const HermitianOp& x) { return x.mat.norm(); }

/// Distance ||X - Y||.
inline double norm_distance(const HermitianOp& x, const HermitianOp& y) {
  require_same_dims(x.dims, y.dims, "norm_distance");
  return (x.mat - y.mat).norm();
}

inline double min_eigenvalue(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

inline double max_eigenvalue(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(h.rows() - 1);
}

/// A density matrix: Hermitian, unit trace, PSD within eps_psd.
struct DensityMatrix {
  HermitianOp op;

  explicit DensityMatrix(HermitianOp o, double eps_psd = tol::psd)
      : op(std::move(o)) {
    const double tr = op.trace();
    if (std::abs(tr - 1.0) > tol::trace_one) {
      throw InputError("DensityMatrix: trace must be 1 (got " + std::to_string(tr) + ")");
    }
    const double lmin = min_eigenvalue(op.mat);
    if (lmin < -eps_psd) {
      throw InputError("DensityMatrix: not positive semidefinite (min eigenvalue " +
                       std::to_string(lmin) + ")");
    }
  }

  const Dims& dims() const { return op.dims; }
  const Matrix& mat() const { return op.mat; }
};

inline DensityMatrix maximally_mixed(Dims dims) {
  Matrix m = Matrix::Identity(dims.mn(), dims.mn()) / double(dims.mn());
  return DensityMatrix(HermitianOp(dims, std::move(m)));
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

enum class Subsystem { A, B };

/// Block-wise transpose on one tensor factor. Involutive, trace- and
/// Hermiticity-preserving, and a Frobenius isometry.
inline HermitianOp partial_transpose(const HermitianOp& x, Subsystem which) {
  const int M = x.dims.M, N = x.dims.N;
  Matrix out(x.mat.rows(), x.mat.cols());
  for (int a = 0; a < M; ++a)
    for (int b = 0; b < N; ++b)
      for (int c = 0; c < M; ++c)
        for (int d = 0; d < N; ++d) {
          if (which == Subsystem::B)
            out(a * N + b, c * N + d) = x.mat(a * N + d, c * N + b);
          else
            out(a * N + b, c * N + d) = x.mat(c * N + b, a * N + d);
        }
  return HermitianOp(x.dims, std::move(out));
}

inline void require_unit(const Vector& v, const char* what) {
  if (std::abs(v.norm() - 1.0) > 1e-9) {
    throw InputError(std::string(what) + ": vector must be normalized (norm " +
                     std::to_string(v.norm()) + ")");
  }
}

/// (I (x) <beta|) A (I (x) |beta>): the M x M operator seen by the first
/// factor when the second factor is pinned to the unit vector beta.
/// Linear in A; <alpha| C |alpha> = tr(A |ab><ab|).
inline Matrix conditional_operator(const HermitianOp& a, const Vector& beta) {
  const int M = a.dims.M, N = a.dims.N;
  if (beta.size() != N) throw InputError("conditional_operator: beta must live in C^N");
  require_unit(beta, "conditional_operator");
  Matrix c(M, M);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j)
      c(i, j) = beta.adjoint() * a.mat.block(i * N, j * N, N, N) * beta;
  return c;
}

/// (<alpha| (x) I) A (|alpha> (x) I): the N x N mirror contraction.
inline Matrix conditional_operator_alpha(const HermitianOp& a, const Vector& alpha) {
  const int M = a.dims.M, N = a.dims.N;
  if (alpha.size() != M) throw InputError("conditional_operator_alpha: alpha must live in C^M");
  require_unit(alpha, "conditional_operator_alpha");
  Matrix c = Matrix::Zero(N, N);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j)
      c += std::conj(alpha(i)) * alpha(j) * a.mat.block(i * N, j * N, N, N);
  return c;
}

/// Phase gauge: rotate a global phase so the first component with
/// |v_j| > eps is real and nonnegative.
inline Vector gauge_fix(Vector v, double eps = tol::unit_vector) {
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    const double m = std::abs(v(j));
    if (m > eps) {
      v *= std::conj(v(j)) / m;
      v(j) = Complex(m, 0.0);
      break;
    }
  }
  return v;
}

struct EigenPair {
  double value;
  Vector vector;
};

/// Largest eigenvalue and a deterministic unit eigenvector of a Hermitian
/// matrix. Residual ||Hv - lv|| <= eps_residual.
///
/// Tie-breaking for (near-)degenerate top eigenspaces: project standard
/// basis vectors e_0, e_1, ... onto the top eigenspace and return the first
/// projection with nonzero norm, normalized. For a one-dimensional
/// eigenspace this reduces to the phase gauge (first nonzero component real
/// nonnegative); for H = I it returns e_0.
inline EigenPair top_eigenpair(const Matrix& h, double eps_herm = tol::hermiticity) {
  if (h.rows() != h.cols()) throw InputError("top_eigenpair: matrix must be square");
  const double defect = hermiticity_defect(h);
  if (!(defect <= eps_herm)) {
    throw InputError("top_eigenpair: matrix is not Hermitian (defect " +
                     std::to_string(defect) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint().eval()));
  const auto& vals = es.eigenvalues();
  const Eigen::Index d = h.rows();
  const double lmax = vals(d - 1);
  const double width = tol::degeneracy * std::max(1.0, std::abs(lmax));
  Eigen::Index lo = d - 1;
  while (lo > 0 && vals(lo - 1) >= lmax - width) --lo;

  // Projector onto the (near-)degenerate top eigenspace.
  const Matrix vtop = es.eigenvectors().rightCols(d - lo);
  Vector v = Vector::Zero(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    Vector proj = vtop * (vtop.adjoint().col(j)).eval();
    // ||P e_j||^2 = P_jj for a projector
    if (proj.norm() > 1e-6) {
      v = proj / proj.norm();
      break;
    }
  }
  return EigenPair{lmax, gauge_fix(std::move(v))};
}

}  // namespace sepwit
