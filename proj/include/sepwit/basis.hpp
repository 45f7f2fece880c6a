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
 * @file basis.hpp
 * Orthonormal Hermitian operator basis for C^M (x) C^N, built as tensor
 * products of two single-system generalized Gell-Mann bases. This gives the
 * isomorphism between Hermitian operators and R^n (n = M^2 N^2): the
 * coefficient vector of X has entries tr(B_l X), and tr(XY) equals the dot
 * product of coefficient vectors.
 *
 * Single-system order for dimension d (all elements orthonormal under
 * tr(B_i B_j) = delta_ij):
 *   [0]                 I/sqrt(d)
 *   [1 .. d(d-1)/2]     symmetric pairs (E_jk + E_kj)/sqrt(2), (j,k) lexicographic
 *   [.. d(d-1)]         antisymmetric pairs i(E_kj - E_jk)/sqrt(2), (j,k) lexicographic
 *   [.. d^2-1]          diagonal (sum_{j<l} E_jj - l E_ll)/sqrt(l(l+1)), l = 1..d-1
 *
 * Product order: element i*N^2 + j is A_i (x) B_j, so element 0 is
 * I/sqrt(MN) and every other element is traceless. The basis is separable
 * (each element is a tensor product of local Hermitian operators).
 */
#pragma once

#include <vector>

#include "sepwit/hermitian.hpp"
#include "sepwit/types.hpp"

namespace sepwit {

/// Orthonormal Hermitian basis of a single d-dimensional system, in the
/// canonical order documented above.
inline std::vector<Matrix> single_system_basis(int d) {
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(d) * d);
  const double s2 = std::sqrt(2.0);
  out.push_back(Matrix::Identity(d, d) / std::sqrt(double(d)));
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      Matrix m = Matrix::Zero(d, d);
      m(j, k) = Complex(1.0 / s2, 0.0);
      m(k, j) = Complex(1.0 / s2, 0.0);
      out.push_back(std::move(m));
    }
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      Matrix m = Matrix::Zero(d, d);
      m(j, k) = Complex(0.0, -1.0 / s2);
      m(k, j) = Complex(0.0, 1.0 / s2);
      out.push_back(std::move(m));
    }
  for (int l = 1; l < d; ++l) {
    Matrix m = Matrix::Zero(d, d);
    const double scale = 1.0 / std::sqrt(double(l) * (l + 1));
    for (int j = 0; j < l; ++j) m(j, j) = Complex(scale, 0.0);
    m(l, l) = Complex(-double(l) * scale, 0.0);
    out.push_back(std::move(m));
  }
  return out;
}

/// The n-element product basis together with coefficient transforms.
struct OperatorBasis {
  Dims dims;
  std::vector<Matrix> elements;   // n full MN x MN matrices
  std::vector<Matrix> factor_a;   // M^2 local matrices
  std::vector<Matrix> factor_b;   // N^2 local matrices

  static constexpr int default_max_mn = 36;

  static OperatorBasis build(Dims dims, int max_mn = default_max_mn) {
    if (dims.mn() > max_mn) {
      throw InputError("OperatorBasis: MN = " + std::to_string(dims.mn()) +
                       " exceeds the configured maximum " + std::to_string(max_mn) +
                       " (n = " + std::to_string(dims.n()) + ")");
    }
    OperatorBasis b{dims, {}, single_system_basis(dims.M), single_system_basis(dims.N)};
    b.elements.reserve(static_cast<std::size_t>(dims.n()));
    for (const auto& ga : b.factor_a)
      for (const auto& hb : b.factor_b) b.elements.push_back(kron(ga, hb));
    return b;
  }

  /// Coefficients of a raw Hermitian matrix over this basis.
  RealVector coeffs(const Matrix& x) const {
    RealVector c(static_cast<Eigen::Index>(elements.size()));
    for (std::size_t l = 0; l < elements.size(); ++l)
      c(static_cast<Eigen::Index>(l)) = trace_product(elements[l], x);
    return c;
  }

  RealVector coeffs(const HermitianOp& x) const {
    require_same_dims(dims, x.dims, "OperatorBasis::coeffs");
    return coeffs(x.mat);
  }

  /// Reconstruct sum_l c_l B_l.
  HermitianOp from_coeffs(const RealVector& c) const {
    if (c.size() != static_cast<Eigen::Index>(elements.size())) {
      throw InputError("OperatorBasis::from_coeffs: expected " +
                       std::to_string(elements.size()) + " coefficients");
    }
    Matrix m = Matrix::Zero(dims.mn(), dims.mn());
    for (std::size_t l = 0; l < elements.size(); ++l) m += c(static_cast<Eigen::Index>(l)) * elements[l];
    return HermitianOp(dims, std::move(m));
  }

  /// Coefficients of a local (single-factor) Hermitian matrix.
  RealVector factor_coeffs(const Matrix& x, Subsystem which) const {
    const auto& fb = (which == Subsystem::A) ? factor_a : factor_b;
    RealVector c(static_cast<Eigen::Index>(fb.size()));
    for (std::size_t l = 0; l < fb.size(); ++l)
      c(static_cast<Eigen::Index>(l)) = trace_product(fb[l], x);
    return c;
  }

  /// Coefficients of sigma_a (x) sigma_b from local coefficients: the
  /// product structure makes the full vector the outer product of the two
  /// local ones, in the index order l = i*N^2 + j.
  RealVector product_coeffs(const RealVector& ca, const RealVector& cb) const {
    RealVector c(ca.size() * cb.size());
    for (Eigen::Index i = 0; i < ca.size(); ++i)
      c.segment(i * cb.size(), cb.size()) = ca(i) * cb;
    return c;
  }
};

/// Convenience entry point mirroring the operator-space contract: n
/// orthonormal elements, identity-first, deterministic order.
inline OperatorBasis build_basis(Dims dims, int max_mn = OperatorBasis::default_max_mn) {
  return OperatorBasis::build(dims, max_mn);
}

}  // namespace sepwit
