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

// Command-line surface: solve / ppt / witness-check / partial / nearest-sep /
// generate / bench. JSON in, JSON out; identical inputs and seed give
// identical output (timings excluded). Exit status: 0 on a successful
// verdict, 2 on input errors, 3 on budget exhaustion.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sepwit/json_io.hpp"

namespace {

using nlohmann::json;
using namespace sepwit;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InputError("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

void write_output(const json& j, const std::string& output_path) {
  if (output_path.empty() || output_path == "-") {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(output_path);
    if (!out) throw InputError("cannot open output file: " + output_path);
    out << j.dump(2) << "\n";
  }
}

struct CommonFlags {
  std::string input;
  std::string output;
  std::string config_path;
  double delta = 0.01;
  std::uint64_t seed = 1;
  long max_oracle_calls = 0;
  std::string oracle_backend = "grid";  // grid | seesaw
  double grid_h = 0.0;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_input = true) {
  if (with_input) cmd->add_option("--input", f.input, "input JSON file");
  cmd->add_option("--output", f.output, "output file (default: stdout)");
  cmd->add_option("--config", f.config_path, "solver config JSON file");
  cmd->add_option("--delta", f.delta, "precision parameter");
  cmd->add_option("--seed", f.seed, "RNG seed");
  cmd->add_option("--max-oracle-calls", f.max_oracle_calls, "oracle call budget");
  cmd->add_option("--oracle", f.oracle_backend, "oracle backend: grid (certified) or seesaw")
      ->check(CLI::IsMember({"grid", "seesaw"}));
  cmd->add_option("--grid-h", f.grid_h, "grid resolution for the certified backend");
}

SolverConfig build_config(const CommonFlags& f) {
  SolverConfig cfg;
  if (!f.config_path.empty()) cfg = io::solver_config_from_json(read_json_file(f.config_path));
  cfg.seed = f.seed;
  if (f.max_oracle_calls > 0) cfg.max_oracle_calls = f.max_oracle_calls;
  if (f.grid_h > 0.0) cfg.grid_h = f.grid_h;
  if (f.oracle_backend == "seesaw") {
    cfg.grid_k_max = -1;  // disable the certified backend
    cfg.validation = ValidationPolicy::Heuristic;
  }
  return cfg;
}

DensityMatrix load_state(const CommonFlags& f) {
  if (f.input.empty()) throw InputError("--input is required");
  return io::density_from_json(read_json_file(f.input));
}

int run_solve(const CommonFlags& f) {
  const DensityMatrix rho = load_state(f);
  const Verdict v = solve(rho, f.delta, build_config(f));
  write_output(io::to_json(v), f.output);
  return 0;
}

int run_ppt(const CommonFlags& f) {
  const DensityMatrix rho = load_state(f);
  write_output(io::to_json(ppt_test(rho)), f.output);
  return 0;
}

int run_witness_check(const CommonFlags& f, const std::string& witness_path) {
  const DensityMatrix rho = load_state(f);
  if (witness_path.empty()) throw InputError("--witness is required");
  const HermitianOp a = io::hermitian_from_json(read_json_file(witness_path));
  OracleOptions opts;
  opts.seed = f.seed;
  if (f.grid_h > 0.0) opts.grid_h = f.grid_h;
  if (f.oracle_backend == "seesaw") opts.grid_policy = GridPolicy::Never;
  write_output(io::to_json(validate_witness(a, rho, f.delta, opts)), f.output);
  return 0;
}

int run_nearest_sep(const CommonFlags& f) {
  const DensityMatrix rho = load_state(f);
  FwOptions opts;
  opts.seed = f.seed;
  if (f.max_oracle_calls > 0) opts.max_oracle_calls = f.max_oracle_calls;
  opts.certified_floor = f.oracle_backend == "grid" && rho.dims().k() <= opts.grid_k_max;
  if (f.grid_h > 0.0) opts.floor_grid_h = f.grid_h;
  const FwResult res = frank_wolfe_nearest(rho, f.delta, opts);
  write_output(io::to_json(res), f.output);
  return 0;
}

int run_partial(const CommonFlags& f, int m_flag, int n_flag) {
  std::istream* in = &std::cin;
  std::ifstream file;
  if (!f.input.empty() && f.input != "-") {
    file.open(f.input);
    if (!file) throw InputError("cannot open input file: " + f.input);
    in = &file;
  }
  std::optional<Dims> dims;
  if (m_flag > 0 && n_flag > 0) dims = Dims(m_flag, n_flag);
  std::optional<MeasurementSet> ms;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(*in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw InputError("malformed JSON on line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!j.contains("observable")) {
      // Header line with dimensions.
      if (j.contains("M") && j.contains("N")) {
        dims = io::dims_from_json(j);
        continue;
      }
      throw InputError("line " + std::to_string(lineno) +
                       ": expected a measurement or an {\"M\",\"N\"} header");
    }
    if (!dims) dims = Dims(2, 2);
    if (!ms) ms = MeasurementSet::create(*dims);
    auto [obs, value] = io::measurement_from_json(j, *dims);
    ms = add_measurement(*ms, obs, value);
  }
  if (!ms) throw InputError("no measurements supplied");
  const SubspaceVerdict v = subspace_solve(*ms, f.delta, build_config(f));
  write_output(io::to_json(v), f.output);
  return 0;
}

int run_generate(const CommonFlags& f, const std::string& family, double p, double lambda,
                 int m_flag, int n_flag, int terms) {
  json out;
  const Dims dims(m_flag, n_flag);
  if (family == "werner") {
    out = io::to_json(werner(p));
  } else if (family == "bell") {
    out = io::to_json(bell_phi_plus());
  } else if (family == "singlet") {
    out = io::to_json(singlet());
  } else if (family == "isotropic") {
    if (m_flag != n_flag) throw InputError("generate: isotropic needs M == N");
    out = io::to_json(isotropic(m_flag, lambda));
  } else if (family == "max-mixed") {
    out = io::to_json(maximally_mixed(dims));
  } else if (family == "random") {
    out = io::to_json(random_state(dims, f.seed));
  } else if (family == "random-separable") {
    const auto [rho, decomp] = random_separable(dims, terms, f.seed);
    out = io::to_json(rho);
  } else {
    throw InputError("generate: unknown family " + family);
  }
  write_output(out, f.output);
  return 0;
}

int run_bench(const CommonFlags& f, int repeat) {
  const DensityMatrix rho = load_state(f);
  json rows = json::array();
  for (int r = 0; r < repeat; ++r) {
    SolverConfig cfg = build_config(f);
    cfg.seed = mix_seed(f.seed, static_cast<std::uint64_t>(r));
    const auto t0 = std::chrono::steady_clock::now();
    const Verdict v = solve(rho, f.delta, cfg);
    const auto t1 = std::chrono::steady_clock::now();
    rows.push_back(
        {{"run", r},
         {"verdict", v.kind == VerdictKind::ENTANGLED ? "ENTANGLED" : "SEPARABLE"},
         {"termination", v.termination},
         {"iterations", v.iterations},
         {"oracle_calls", v.oracle_calls},
         {"wall_ms", std::chrono::duration<double, std::milli>(t1 - t0).count()}});
  }
  write_output(rows, f.output);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bipartite separability test via analytic-center cutting planes"};
  app.require_subcommand(1);

  CommonFlags f;
  std::string witness_path, family = "werner";
  double p = 0.5, lambda = 0.9;
  int m_flag = 2, n_flag = 2, terms = 4, repeat = 1;

  auto* c_solve = app.add_subcommand("solve", "decide SEPARABLE or return a witness");
  add_common(c_solve, f);
  auto* c_ppt = app.add_subcommand("ppt", "partial-transpose spectrum test");
  add_common(c_ppt, f);
  auto* c_wc = app.add_subcommand("witness-check", "validate a candidate witness");
  add_common(c_wc, f);
  c_wc->add_option("--witness", witness_path, "witness operator JSON");
  auto* c_partial = app.add_subcommand("partial", "witness search from measured expected values");
  add_common(c_partial, f);
  c_partial->add_option("--M", m_flag, "first factor dimension");
  c_partial->add_option("--N", n_flag, "second factor dimension");
  auto* c_near = app.add_subcommand("nearest-sep", "Frank-Wolfe distance to the separable set");
  add_common(c_near, f);
  auto* c_gen = app.add_subcommand("generate", "emit a test-family state as JSON");
  add_common(c_gen, f, false);
  c_gen->add_option("--family", family,
                    "werner|bell|singlet|isotropic|max-mixed|random|random-separable");
  c_gen->add_option("--p", p, "werner mixing parameter");
  c_gen->add_option("--lambda", lambda, "isotropic mixing parameter");
  c_gen->add_option("--M", m_flag, "first factor dimension");
  c_gen->add_option("--N", n_flag, "second factor dimension");
  c_gen->add_option("--terms", terms, "terms for random-separable");
  auto* c_bench = app.add_subcommand("bench", "solve repeatedly, reporting calls and timings");
  add_common(c_bench, f);
  c_bench->add_option("--repeat", repeat, "number of runs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_solve->parsed()) return run_solve(f);
    if (c_ppt->parsed()) return run_ppt(f);
    if (c_wc->parsed()) return run_witness_check(f, witness_path);
    if (c_partial->parsed()) return run_partial(f, m_flag, n_flag);
    if (c_near->parsed()) return run_nearest_sep(f);
    if (c_gen->parsed()) return run_generate(f, family, p, lambda, m_flag, n_flag, terms);
    if (c_bench->parsed()) return run_bench(f, repeat);
  } catch (const BudgetExhausted& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return 3;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
