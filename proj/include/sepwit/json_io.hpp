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
 * @file json_io.hpp
 * JSON schemas shared by the CLI and the tests.
 *
 * Density matrix / Hermitian operator:
 *   {"M": int, "N": int, "matrix": [[[re, im], ...], ...]}   (row-major MN x MN)
 * Hermitian operators may alternatively carry "coeffs": [n reals] over the
 * canonical operator basis.
 *
 * Measurement stream (JSON Lines): one object per line,
 *   {"observable": "XX" | {"coeffs": [...]} | {"matrix": [[[re,im],...],...]},
 *    "value": real}
 * Pauli strings name one single-character factor per side and require both
 * local dimensions to be 2. An optional header line {"M": int, "N": int}
 * pins the dimensions.
 */
#pragma once

#include <json.hpp>

#include "sepwit/cutting_plane.hpp"
#include "sepwit/frank_wolfe.hpp"
#include "sepwit/partial_info.hpp"
#include "sepwit/verifiers.hpp"

namespace sepwit::io {

using nlohmann::json;

inline json complex_matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back({m(i, j).real(), m(i, j).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix complex_matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
    throw InputError("matrix: expected " + std::to_string(rows) + " rows");
  }
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw InputError("matrix: expected " + std::to_string(cols) + " entries per row");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& e = row[static_cast<std::size_t>(c)];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw InputError("matrix: entries must be [re, im] pairs");
      }
      m(i, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

inline json complex_vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

inline json real_vector_to_json(const RealVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

inline RealVector real_vector_from_json(const json& j) {
  if (!j.is_array()) throw InputError("expected an array of reals");
  RealVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InputError("expected an array of reals");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

inline Dims dims_from_json(const json& j) {
  if (!j.contains("M") || !j.contains("N") || !j["M"].is_number_integer() ||
      !j["N"].is_number_integer()) {
    throw InputError("expected integer fields \"M\" and \"N\"");
  }
  return Dims(j["M"].get<int>(), j["N"].get<int>());
}

inline json to_json(const DensityMatrix& rho) {
  return json{{"M", rho.dims().M}, {"N", rho.dims().N},
              {"matrix", complex_matrix_to_json(rho.mat())}};
}

inline DensityMatrix density_from_json(const json& j) {
  const Dims d = dims_from_json(j);
  if (!j.contains("matrix")) throw InputError("density matrix: missing \"matrix\"");
  Matrix m = complex_matrix_from_json(j["matrix"], d.mn(), d.mn());
  return DensityMatrix(HermitianOp(d, std::move(m)));
}

inline json to_json(const HermitianOp& op, const OperatorBasis* basis = nullptr) {
  json out{{"M", op.dims.M}, {"N", op.dims.N}, {"matrix", complex_matrix_to_json(op.mat)}};
  if (basis) out["coeffs"] = real_vector_to_json(basis->coeffs(op));
  return out;
}

inline HermitianOp hermitian_from_json(const json& j) {
  const Dims d = dims_from_json(j);
  if (j.contains("matrix")) {
    return HermitianOp(d, complex_matrix_from_json(j["matrix"], d.mn(), d.mn()));
  }
  if (j.contains("coeffs")) {
    const RealVector c = real_vector_from_json(j["coeffs"]);
    return OperatorBasis::build(d).from_coeffs(c);
  }
  throw InputError("hermitian operator: need \"matrix\" or \"coeffs\"");
}

inline json to_json(const ProductState& s) {
  return json{{"alpha", complex_vector_to_json(s.alpha)},
              {"beta", complex_vector_to_json(s.beta)}};
}

inline json to_json(const SeparableDecomposition& d) {
  json terms = json::array();
  for (const auto& wt : d.terms) {
    json t = to_json(wt.state);
    t["weight"] = wt.weight;
    terms.push_back(std::move(t));
  }
  return terms;
}

inline json to_json(const IterationRecord& r) {
  json out{{"iteration", r.iteration},   {"action", r.action},
           {"threshold", r.threshold},   {"f_lower", r.f_lower},
           {"f_upper", r.f_upper},       {"upper_certified", r.upper_certified},
           {"center_grad_norm", r.center_grad_norm}};
  if (r.cut_coeffs.size() > 0) out["cut_coeffs"] = real_vector_to_json(r.cut_coeffs);
  return out;
}

inline json to_json(const Verdict& v, bool include_trace = true) {
  json out{{"verdict", v.kind == VerdictKind::ENTANGLED ? "ENTANGLED" : "SEPARABLE"},
           {"termination", v.termination},
           {"iterations", v.iterations},
           {"oracle_calls", v.oracle_calls},
           {"max_center_grad_norm", v.max_center_grad_norm}};
  if (v.witness) {
    json w{{"M", v.witness->op.dims.M},
           {"N", v.witness->op.dims.N},
           {"matrix", complex_matrix_to_json(v.witness->op.mat)},
           {"coeffs", real_vector_to_json(v.witness->coeffs)},
           {"margin", v.witness->margin},
           {"certified", v.witness->certified}};
    out["witness"] = std::move(w);
  }
  if (v.decomposition) out["decomposition"] = to_json(*v.decomposition);
  if (include_trace) {
    json tr = json::array();
    for (const auto& r : v.trace) tr.push_back(to_json(r));
    out["trace"] = std::move(tr);
  }
  return out;
}

inline json to_json(const PptReport& r) {
  json out{{"verdict", r.verdict == PptVerdict::PPT_NEGATIVE ? "PPT_NEGATIVE" : "PPT_POSITIVE"},
           {"min_eigenvalue", r.min_eigenvalue}};
  if (r.eigenvector) out["eigenvector"] = complex_vector_to_json(*r.eigenvector);
  return out;
}

inline json to_json(const FwResult& r) {
  return json{{"distance", r.distance},
              {"converged", r.converged},
              {"oracle_calls", r.oracle_calls},
              {"lower_bound", r.lower_bound},
              {"terms", to_json(r.decomposition)}};
}

inline json to_json(const ValidationResult& r) {
  return json{{"result", to_string(r.level)}, {"reason", r.reason},
              {"margin", r.margin},           {"f_lower", r.f_lower},
              {"f_upper", r.f_upper},         {"evaluations", r.evaluations}};
}

inline json to_json(const SubspaceVerdict& v, bool include_trace = true) {
  json out{{"verdict", v.kind == SubspaceKind::ENTANGLED ? "ENTANGLED" : "INCONCLUSIVE"},
           {"termination", v.termination},
           {"iterations", v.iterations},
           {"oracle_calls", v.oracle_calls},
           {"max_center_grad_norm", v.max_center_grad_norm}};
  if (v.witness) {
    json w{{"M", v.witness->op.dims.M},
           {"N", v.witness->op.dims.N},
           {"matrix", complex_matrix_to_json(v.witness->op.mat)},
           {"coeffs", real_vector_to_json(v.witness->coeffs)},
           {"margin", v.witness->margin},
           {"certified", v.witness->certified},
           {"observable_combination", real_vector_to_json(v.observable_combination)},
           {"identity_offset", v.identity_offset}};
    out["witness"] = std::move(w);
  }
  if (include_trace) {
    json tr = json::array();
    for (const auto& r : v.trace) tr.push_back(to_json(r));
    out["trace"] = std::move(tr);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Solver config
// ---------------------------------------------------------------------------

inline SolverConfig solver_config_from_json(const json& j) {
  SolverConfig c;
  const auto num = [&](const char* key, double& slot) {
    if (j.contains(key)) {
      if (!j[key].is_number()) throw InputError(std::string("config: ") + key + " must be a number");
      slot = j[key].get<double>();
    }
  };
  const auto integer = [&](const char* key, auto& slot) {
    if (j.contains(key)) {
      if (!j[key].is_number_integer())
        throw InputError(std::string("config: ") + key + " must be an integer");
      slot = j[key].get<long>();
    }
  };
  num("cap_factor", c.cap_factor);
  num("grid_h", c.grid_h);
  num("grid_h_min", c.grid_h_min);
  long starts = c.oracle_starts;
  integer("oracle_starts", starts);
  c.oracle_starts = static_cast<int>(starts);
  integer("max_oracle_calls", c.max_oracle_calls);
  integer("fw_budget", c.fw_budget);
  long seed = static_cast<long>(c.seed);
  integer("seed", seed);
  c.seed = static_cast<std::uint64_t>(seed);
  long kmax = c.grid_k_max;
  integer("grid_k_max", kmax);
  c.grid_k_max = static_cast<int>(kmax);
  long threads = c.threads;
  integer("threads", threads);
  c.threads = static_cast<int>(threads);
  if (j.contains("record_cuts")) {
    if (!j["record_cuts"].is_boolean()) throw InputError("config: record_cuts must be a boolean");
    c.record_cuts = j["record_cuts"].get<bool>();
  }
  if (j.contains("validation")) {
    const std::string v = j["validation"].get<std::string>();
    if (v == "auto") c.validation = ValidationPolicy::Auto;
    else if (v == "certify") c.validation = ValidationPolicy::Certify;
    else if (v == "heuristic") c.validation = ValidationPolicy::Heuristic;
    else throw InputError("config: validation must be auto|certify|heuristic");
  }
  return c;
}

inline json to_json(const SolverConfig& c) {
  const char* v = c.validation == ValidationPolicy::Auto      ? "auto"
                  : c.validation == ValidationPolicy::Certify ? "certify"
                                                              : "heuristic";
  return json{{"cap_factor", c.cap_factor},
              {"oracle_starts", c.oracle_starts},
              {"grid_h", c.grid_h},
              {"grid_h_min", c.grid_h_min},
              {"max_oracle_calls", c.max_oracle_calls},
              {"fw_budget", c.fw_budget},
              {"validation", v},
              {"seed", c.seed},
              {"record_cuts", c.record_cuts},
              {"grid_k_max", c.grid_k_max},
              {"threads", c.threads}};
}

// ---------------------------------------------------------------------------
// Measurement stream
// ---------------------------------------------------------------------------

inline Matrix pauli_matrix(char c) {
  Matrix m(2, 2);
  switch (c) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default:
      throw InputError(std::string("pauli string: unknown letter '") + c + "'");
  }
  return m;
}

/// Parse one measurement line against the given dimensions.
inline std::pair<HermitianOp, double> measurement_from_json(const json& j, Dims dims) {
  if (!j.contains("observable") || !j.contains("value") || !j["value"].is_number()) {
    throw InputError("measurement: need \"observable\" and numeric \"value\"");
  }
  const double value = j["value"].get<double>();
  const json& obs = j["observable"];
  if (obs.is_string()) {
    const std::string s = obs.get<std::string>();
    if (s.size() != 2) throw InputError("pauli string: expected two letters, one per factor");
    if (dims.M != 2 || dims.N != 2) {
      throw InputError("pauli string: both factors must have dimension 2");
    }
    Matrix m = kron(pauli_matrix(s[0]), pauli_matrix(s[1]));
    return {HermitianOp(dims, std::move(m)), value};
  }
  if (obs.is_object() && obs.contains("coeffs")) {
    const RealVector c = real_vector_from_json(obs["coeffs"]);
    if (c.size() != dims.n()) {
      throw InputError("measurement coeffs: expected n = " + std::to_string(dims.n()) +
                       " entries");
    }
    return {OperatorBasis::build(dims).from_coeffs(c), value};
  }
  if (obs.is_object() && obs.contains("matrix")) {
    return {HermitianOp(dims, complex_matrix_from_json(obs["matrix"], dims.mn(), dims.mn())),
            value};
  }
  throw InputError("measurement: observable must be a pauli string, coeffs, or matrix");
}

}  // namespace sepwit::io
