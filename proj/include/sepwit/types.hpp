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
 * @file types.hpp
 * Bipartite dimension bookkeeping, error types and shared numeric tolerances.
 */
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sepwit {

/// Thrown on malformed or out-of-contract inputs (CLI exit status 2).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a configured evaluation/oracle budget runs out (CLI exit status 3).
class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A measured expected value contradicts values already ingested.
class MeasurementInconsistency : public InputError {
 public:
  using InputError::InputError;
};

/// Dimensions of a bipartite system C^M (x) C^N.
///
/// n = M^2 N^2 is the real dimension of the Hermitian operator space,
/// k = 2(M+N)-4 the real parameter count of a gauge-fixed pure product state.
struct Dims {
  int M;
  int N;

  Dims(int m, int n_) : M(m), N(n_) {
    if (M < 2 || N < 2) {
      throw InputError("Dims: both local dimensions must be >= 2 (got M=" +
                       std::to_string(M) + ", N=" + std::to_string(N) + ")");
    }
  }

  int mn() const { return M * N; }
  int n() const { return M * M * N * N; }
  int k() const { return 2 * (M + N) - 4; }

  bool operator==(const Dims& o) const { return M == o.M && N == o.N; }
  bool operator!=(const Dims& o) const { return !(*this == o); }

  std::string str() const { return std::to_string(M) + "x" + std::to_string(N); }
};

inline void require_same_dims(const Dims& a, const Dims& b, const char* where) {
  if (a != b) {
    throw InputError(std::string(where) + ": dimension mismatch (" + a.str() +
                     " vs " + b.str() + ")");
  }
}

namespace tol {
inline constexpr double hermiticity = 1e-10;   // max-entry |X - X^dag|
inline constexpr double psd = 1e-8;            // min eigenvalue floor for states
inline constexpr double unit_vector = 1e-12;
inline constexpr double trace_one = 1e-9;
inline constexpr double newton_gradient = 1e-8;
inline constexpr double eigen_residual = 1e-9;
inline constexpr double degeneracy = 1e-9;       // relative top-eigenspace width
inline constexpr double dependent_residual = 1e-8;
inline constexpr double weight_sum = 1e-10;
}  // namespace tol

/// splitmix64; used to derive independent per-call seeds from one master seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace sepwit
