// Copyright 2026 The iontrap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: ensemble simulation, quantum-volume sweeps and
// two-qubit gate decomposition. Links only against the C API.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "CLI11.hpp"
#include "iontrap/iontrap.h"
#include "json.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitNonConvergence = 3;
constexpr const char* kOutputDirEnv = "IONTRAP_OUTPUT_DIR";

// Raised for failures reported by the library; maps to kExitRuntime.
class RuntimeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised for semantically invalid flag combinations; maps to kExitUsage.
class UsageFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void check(itr_status status, const std::string& context) {
  if (status == ITR_OK) return;
  throw RuntimeFailure(context + ": " + itr_status_string(status) + ": " + itr_last_error());
}

struct StringDeleter {
  void operator()(char* s) const { itr_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct EnsembleDeleter {
  void operator()(itr_ensemble* e) const { itr_ensemble_destroy(e); }
};
using OwnedEnsemble = std::unique_ptr<itr_ensemble, EnsembleDeleter>;

struct CostModelDeleter {
  void operator()(itr_cost_model* m) const { itr_cost_model_destroy(m); }
};
using OwnedCostModel = std::unique_ptr<itr_cost_model, CostModelDeleter>;

struct DecompositionDeleter {
  void operator()(itr_decomposition* d) const { itr_decomposition_destroy(d); }
};
using OwnedDecomposition = std::unique_ptr<itr_decomposition, DecompositionDeleter>;

// Parses "a..b" into an inclusive integer range.
std::pair<int, int> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw UsageFailure("range must look like a..b, got '" + text + "'");
  try {
    std::size_t used_a = 0;
    std::size_t used_b = 0;
    const std::string a = text.substr(0, dots);
    const std::string b = text.substr(dots + 2);
    const int lo = std::stoi(a, &used_a);
    const int hi = std::stoi(b, &used_b);
    if (used_a != a.size() || used_b != b.size() || lo > hi) throw std::invalid_argument(text);
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw UsageFailure("range must look like a..b with a <= b, got '" + text + "'");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RuntimeFailure("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Resolves an output path against the output directory environment variable.
std::string resolve_output(const std::string& path) {
  if (path.empty() || path == "-") return path;
  std::filesystem::path p(path);
  const char* dir = std::getenv(kOutputDirEnv);
  if (p.is_relative() && dir != nullptr && *dir != '\0') p = std::filesystem::path(dir) / p;
  return p.string();
}

// Writes `content` to `path`, or to stdout for an empty path or "-".
void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(p);
  if (!out) throw RuntimeFailure("cannot open " + path + " for writing");
  out << content;
  out.flush();
  if (!out) throw RuntimeFailure("cannot write " + path);
}

// Prefixes every line of a JSON config dump with "# " for CSV outputs.
std::string comment_block(const json& config) {
  std::ostringstream os;
  std::istringstream lines(config.dump(2));
  std::string line;
  while (std::getline(lines, line)) os << "# " << line << '\n';
  return os.str();
}

// ---- simulate --------------------------------------------------------------

struct SimulateOptions {
  int m = 0;
  std::string m_range;
  int resolution = 7;
  int density = 2;
  std::vector<std::string> engines;
  double swap_penalty = 0.5;
  int iterations = 300;
  uint64_t seed = 1;
  std::string out;
  std::string format = "csv";
  int jobs = 0;
  bool strict = false;
  std::string trace;
  std::string histogram;
  int64_t step_cap = 0;
};

json summary_to_json(const itr_ensemble_params& p, const itr_ensemble_summary& s) {
  return {{"M", p.device_size},
          {"N", s.qubit_count},
          {"density", p.density},
          {"engine", itr_engine_name(p.engine)},
          {"swap_penalty", p.swap_penalty},
          {"iters", p.iterations},
          {"rounds", s.round_count},
          {"mean_tau", s.mean_tau},
          {"std_tau", s.std_tau},
          {"mean_lower_bound", s.mean_lower_bound},
          {"std_lower_bound", s.std_lower_bound},
          {"mean_passes", s.mean_passes},
          {"std_passes", s.std_passes},
          {"max_passes", s.max_passes},
          {"mean_swaps", s.mean_swaps_per_qubit},
          {"std_swaps", s.std_swaps_per_qubit},
          {"mean_swap_events", s.mean_swap_events_per_qubit},
          {"failures", s.failures},
          {"violations", s.violations},
          {"below_lower_bound", s.below_lower_bound}};
}

// Writes a per-step trace of the first instance of the first configured point.
void write_trace(const SimulateOptions& opt, int m, itr_engine engine) {
  itr_layout* layout = nullptr;
  check(itr_layout_create(m, opt.resolution, &layout), "layout");
  std::unique_ptr<itr_layout, void (*)(itr_layout*)> owned_layout(layout, itr_layout_destroy);
  int positions = 0;
  int interior = 0;
  int exterior = 0;
  check(itr_layout_counts(layout, &positions, &interior, &exterior), "layout counts");
  itr_circuit* circuit = nullptr;
  check(itr_circuit_random(opt.density * (interior + exterior), opt.seed, &circuit), "circuit");
  std::unique_ptr<itr_circuit, void (*)(itr_circuit*)> owned_circuit(circuit, itr_circuit_destroy);
  itr_sim_config cfg;
  itr_sim_config_default(&cfg);
  cfg.density = opt.density;
  cfg.swap_penalty = opt.swap_penalty;
  cfg.step_cap = opt.step_cap;
  itr_run_summary summary{};
  const std::string path = resolve_output(opt.trace);
  check(itr_simulate(layout, circuit, engine, &cfg, path.c_str(), &summary), "trace run");
}

int cmd_simulate(const SimulateOptions& opt) {
  std::vector<int> sizes;
  if (!opt.m_range.empty() && opt.m != 0) throw UsageFailure("use either --m or --m-range, not both");
  if (!opt.m_range.empty()) {
    const auto [lo, hi] = parse_range(opt.m_range);
    for (int m = lo; m <= hi; ++m) sizes.push_back(m);
  } else if (opt.m != 0) {
    sizes.push_back(opt.m);
  } else {
    throw UsageFailure("one of --m or --m-range is required");
  }
  if (opt.format != "csv" && opt.format != "json") throw UsageFailure("--format must be csv or json");

  std::vector<std::string> engine_names = opt.engines.empty() ? std::vector<std::string>{"lane"} : opt.engines;
  std::vector<itr_engine> engines;
  for (const std::string& name : engine_names) {
    itr_engine e{};
    if (itr_engine_from_string(name.c_str(), &e) != ITR_OK) throw UsageFailure(itr_last_error());
    engines.push_back(e);
  }
  const int jobs = opt.jobs > 0 ? opt.jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  json config = {{"subcommand", "simulate"},
                 {"m", sizes},
                 {"resolution", opt.resolution},
                 {"density", opt.density},
                 {"engines", engine_names},
                 {"swap_penalty", opt.swap_penalty},
                 {"iters", opt.iterations},
                 {"seed", opt.seed},
                 {"step_cap", opt.step_cap},
                 {"jobs", jobs},
                 {"strict", opt.strict},
                 {"library_version", itr_version()}};

  if (!opt.trace.empty()) write_trace(opt, sizes.front(), engines.front());

  std::vector<OwnedEnsemble> results;
  json points = json::array();
  std::ostringstream csv;
  csv << comment_block(config) << itr_ensemble_csv_header() << '\n';
  int64_t failures = 0;
  for (int m : sizes) {
    for (itr_engine engine : engines) {
      itr_ensemble_params p;
      itr_ensemble_params_default(&p);
      p.device_size = m;
      p.resolution = opt.resolution;
      p.density = opt.density;
      p.engine = engine;
      p.swap_penalty = opt.swap_penalty;
      p.iterations = opt.iterations;
      p.base_seed = opt.seed;
      p.step_cap = opt.step_cap;
      p.jobs = jobs;
      itr_ensemble* raw = nullptr;
      check(itr_ensemble_run(&p, &raw), "ensemble M=" + std::to_string(m));
      OwnedEnsemble ensemble(raw);
      itr_ensemble_summary s{};
      check(itr_ensemble_summary_get(ensemble.get(), &s), "summary");
      failures += s.failures;
      char* row = nullptr;
      check(itr_ensemble_csv_row(ensemble.get(), &row), "csv row");
      csv << OwnedString(row).get() << '\n';
      points.push_back(summary_to_json(p, s));
      std::cerr << "M=" << m << " engine=" << itr_engine_name(engine) << " mean_tau=" << s.mean_tau
                << " failures=" << s.failures << '\n';
      results.push_back(std::move(ensemble));
    }
  }

  const std::string out = resolve_output(opt.out);
  if (opt.format == "csv") {
    emit(out, csv.str());
  } else {
    emit(out, json{{"config", config}, {"points", points}}.dump(2) + "\n");
  }

  if (!opt.histogram.empty()) {
    std::vector<const itr_ensemble*> handles;
    for (const OwnedEnsemble& e : results) handles.push_back(e.get());
    char* hist = nullptr;
    check(itr_ensemble_histogram_json(handles.data(), handles.size(), &hist), "histogram");
    json doc = json::parse(OwnedString(hist).get());
    doc["config"] = config;
    emit(resolve_output(opt.histogram), doc.dump(2) + "\n");
  }

  if (failures > 0) {
    std::cerr << "warning: " << failures << " run(s) did not converge within the step cap\n";
    if (opt.strict) return kExitNonConvergence;
  }
  return kExitOk;
}

// ---- qv --------------------------------------------------------------------

struct QvOptions {
  std::string params;
  std::string empirical;
  int points_per_decade = 10;
  double eps_max = 1e-2;
  double eps_min = 1e-4;
  double coherence_scale = 10.0;
  std::string out;
  std::string format = "csv";
};

struct Series {
  std::string name;
  itr_cost_model* model;
  itr_error_params params;
};

// Reads (N, mean_tau, mean_passes) rows of a lane-engine simulate CSV.
std::vector<std::tuple<int, double, double>> read_empirical(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  std::vector<std::string> columns;
  std::vector<std::tuple<int, double, double>> rows;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
  };
  auto index_of = [&](const std::string& name) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return i;
    }
    throw RuntimeFailure(path + ": missing column " + name);
  };
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (columns.empty()) {
      columns = split(line);
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != columns.size()) throw RuntimeFailure(path + ": ragged row");
    if (cells[index_of("engine")] != "lane") continue;
    rows.emplace_back(std::stoi(cells[index_of("N")]), std::stod(cells[index_of("mean_tau")]),
                      std::stod(cells[index_of("mean_passes")]));
  }
  if (rows.empty()) throw RuntimeFailure(path + ": no lane-engine rows");
  return rows;
}

int cmd_qv(const QvOptions& opt) {
  if (opt.format != "csv" && opt.format != "json") throw UsageFailure("--format must be csv or json");
  if (opt.points_per_decade < 1) throw UsageFailure("--points-per-decade must be positive");
  if (!(opt.eps_max > 0.0 && opt.eps_min > 0.0 && opt.eps_min <= opt.eps_max)) {
    throw UsageFailure("need 0 < --eps-min <= --eps-max");
  }
  itr_error_params base;
  itr_error_params_default(&base);
  if (!opt.params.empty()) {
    const std::string text = read_file(opt.params);
    check(itr_error_params_from_json(text.c_str(), &base), "params " + opt.params);
  }

  OwnedCostModel all_to_all;
  OwnedCostModel trapped;
  OwnedCostModel grid;
  itr_cost_model* raw = nullptr;
  check(itr_cost_model_create(ITR_ARCH_ALL_TO_ALL, &raw), "cost model");
  all_to_all.reset(raw);
  if (opt.empirical.empty()) {
    check(itr_cost_model_create(ITR_ARCH_TRAPPED_ION, &raw), "cost model");
  } else {
    std::vector<int> n;
    std::vector<double> tau;
    std::vector<double> passes;
    for (const auto& [qn, t, x] : read_empirical(opt.empirical)) {
      n.push_back(qn);
      tau.push_back(t);
      passes.push_back(x);
    }
    check(itr_cost_model_empirical(n.data(), tau.data(), passes.data(), n.size(), &raw), "empirical model");
  }
  trapped.reset(raw);
  check(itr_cost_model_create(ITR_ARCH_SUPERCONDUCTING_GRID, &raw), "cost model");
  grid.reset(raw);

  itr_error_params longer = base;
  longer.coherence_c = base.coherence_c * opt.coherence_scale;
  const std::vector<Series> series = {
      {"all_to_all", all_to_all.get(), base},
      {"trapped_ion", trapped.get(), base},
      {"trapped_ion_10x_coherence", trapped.get(), longer},
      {"superconducting_grid", grid.get(), base},
  };

  // Log grid from eps_max down to eps_min, decade endpoints included exactly.
  const double lo_exp = std::log10(opt.eps_max);
  const double hi_exp = std::log10(opt.eps_min);
  const int steps = static_cast<int>(std::lround((lo_exp - hi_exp) * opt.points_per_decade));
  std::vector<double> grid_eps;
  for (int k = 0; k <= steps; ++k) {
    grid_eps.push_back(std::pow(10.0, lo_exp - static_cast<double>(k) / opt.points_per_decade));
  }

  json config = {{"subcommand", "qv"},
                 {"params",
                  {{"epsilon_gate", "swept"},
                   {"t_shuttle", base.t_shuttle},
                   {"coherence_c", base.coherence_c},
                   {"x_loss", base.x_loss},
                   {"t_combine", base.t_combine},
                   {"t_separate", base.t_separate}}},
                 {"coherence_scale", opt.coherence_scale},
                 {"trapped_ion_model", opt.empirical.empty() ? "analytic" : "empirical:" + opt.empirical},
                 {"eps_max", opt.eps_max},
                 {"eps_min", opt.eps_min},
                 {"points_per_decade", opt.points_per_decade},
                 {"library_version", itr_version()}};

  std::ostringstream csv;
  csv << comment_block(config) << "epsilon_gate,inverse_epsilon,architecture,sqrt_qv,argmax_N,depth,epsilon_eff\n";
  csv << std::setprecision(12);
  json rows = json::array();
  for (const Series& s : series) {
    for (double eps : grid_eps) {
      itr_error_params p = s.params;
      p.epsilon_gate = eps;
      itr_qv_result r{};
      check(itr_qv_native(&p, s.model, nullptr, 0, &r), s.name);
      csv << eps << ',' << 1.0 / eps << ',' << s.name << ',' << r.sqrt_qv << ',' << r.argmax_n << ',' << r.depth
          << ',' << r.epsilon_eff << '\n';
      rows.push_back({{"epsilon_gate", eps},
                      {"inverse_epsilon", 1.0 / eps},
                      {"architecture", s.name},
                      {"sqrt_qv", r.sqrt_qv},
                      {"argmax_N", r.argmax_n},
                      {"depth", r.depth},
                      {"epsilon_eff", r.epsilon_eff}});
    }
  }
  const std::string out = resolve_output(opt.out);
  if (opt.format == "csv") {
    emit(out, csv.str());
  } else {
    emit(out, json{{"config", config}, {"rows", rows}}.dump(2) + "\n");
  }
  return kExitOk;
}

// ---- decompose -------------------------------------------------------------

struct DecomposeOptions {
  std::string preset;
  std::string matrix;
  std::optional<uint64_t> random_seed;
  std::string out;
  bool text = false;
};

int cmd_decompose(const DecomposeOptions& opt) {
  const int sources = (opt.preset.empty() ? 0 : 1) + (opt.matrix.empty() ? 0 : 1) + (opt.random_seed ? 1 : 0);
  if (sources != 1) throw UsageFailure("give exactly one of --preset, --matrix or --random-seed");
  itr_complex u[16];
  json input;
  if (!opt.preset.empty()) {
    check(itr_preset_unitary(opt.preset.c_str(), u), "preset");
    input = {{"preset", opt.preset}};
  } else if (!opt.matrix.empty()) {
    const std::string text = read_file(opt.matrix);
    check(itr_matrix_from_json(text.c_str(), u), "matrix " + opt.matrix);
    input = {{"matrix_file", opt.matrix}};
  } else {
    check(itr_haar_unitary(*opt.random_seed, u), "random unitary");
    input = {{"random_seed", *opt.random_seed}};
  }

  itr_decomposition* raw = nullptr;
  const itr_status status = itr_decompose(u, &raw);
  if (status == ITR_NOT_UNITARY) {
    std::cerr << "error: input is not unitary: " << itr_last_error() << '\n';
    return kExitRuntime;
  }
  check(status, "decompose");
  OwnedDecomposition d(raw);

  char* doc_raw = nullptr;
  check(itr_decomposition_json(d.get(), &doc_raw), "json");
  json doc = json::parse(OwnedString(doc_raw).get());
  char* text_raw = nullptr;
  check(itr_decomposition_text(d.get(), &text_raw), "text");
  const std::string circuit_text = OwnedString(text_raw).get();
  doc["circuit_text"] = circuit_text;
  doc["config"] = {{"subcommand", "decompose"}, {"input", input}, {"library_version", itr_version()}};

  double residual = 0.0;
  check(itr_decomposition_residual(d.get(), &residual), "residual");
  const std::string out = resolve_output(opt.out);
  emit(out, doc.dump(2) + "\n");
  if (opt.text) std::cerr << circuit_text << '\n';
  std::cerr << "residual=" << residual << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trapped-ion X-junction routing, quantum-volume and gate-decomposition toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(itr_version()));

  SimulateOptions sim;
  CLI::App* simulate = app.add_subcommand("simulate", "Run routing ensembles and write per-point statistics");
  simulate->add_option("--m", sim.m, "Device size M (M x M X-junctions)")->check(CLI::Range(1, 64));
  simulate->add_option("--m-range", sim.m_range, "Inclusive device-size range, e.g. 2..12");
  simulate->add_option("--r", sim.resolution, "Positions per junction spacing")->check(CLI::Range(3, 101));
  simulate->add_option("--density", sim.density, "Qubits per X-junction (at most 6 at R=7)")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--engine", sim.engines, "lane, swap or lower-bound (repeatable)");
  simulate->add_option("--swap-penalty", sim.swap_penalty, "Swap cost as a fraction of a junction spacing")
      ->check(CLI::Range(0.0, 100.0));
  simulate->add_option("--iters", sim.iterations, "Random circuits per point")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed, "Base seed; run k uses a stream derived from it");
  simulate->add_option("--step-cap", sim.step_cap, "Raw step cap per run (0 selects 50*R*M)")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--out", sim.out, "Output file (stdout when omitted)");
  simulate->add_option("--format", sim.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  simulate->add_option("--jobs", sim.jobs, "Worker threads (0 uses all cores)")->check(CLI::NonNegativeNumber);
  simulate->add_flag("--strict", sim.strict, "Exit with status 3 if any run fails to converge");
  simulate->add_option("--trace", sim.trace, "Write a JSON-lines move trace of the first instance");
  simulate->add_option("--histogram", sim.histogram, "Write pass-count histograms as JSON");

  QvOptions qv;
  CLI::App* qv_cmd = app.add_subcommand("qv", "Sweep native quantum volume against two-qubit gate error");
  qv_cmd->add_option("--params", qv.params, "JSON file with error-model parameters")->check(CLI::ExistingFile);
  qv_cmd->add_option("--empirical", qv.empirical, "simulate CSV with lane rows for the measured trapped-ion model")
      ->check(CLI::ExistingFile);
  qv_cmd->add_option("--points-per-decade", qv.points_per_decade, "Grid density in epsilon");
  qv_cmd->add_option("--eps-max", qv.eps_max, "Largest gate error in the sweep");
  qv_cmd->add_option("--eps-min", qv.eps_min, "Smallest gate error in the sweep");
  qv_cmd->add_option("--coherence-scale", qv.coherence_scale, "Coherence multiplier for the second trapped-ion series")
      ->check(CLI::PositiveNumber);
  qv_cmd->add_option("--out", qv.out, "Output file (stdout when omitted)");
  qv_cmd->add_option("--format", qv.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  DecomposeOptions dec;
  uint64_t seed = 0;
  CLI::App* dec_cmd = app.add_subcommand("decompose", "Decompose a two-qubit unitary into MS, Rx and Ry gates");
  dec_cmd->add_option("--preset", dec.preset, "identity, cnot, swap, iswap or ms:<chi>");
  dec_cmd->add_option("--matrix", dec.matrix, "JSON file holding a 4x4 complex matrix")->check(CLI::ExistingFile);
  CLI::Option* seed_opt = dec_cmd->add_option("--random-seed", seed, "Decompose a Haar-random unitary");
  dec_cmd->add_option("--out", dec.out, "Output file (stdout when omitted)");
  dec_cmd->add_flag("--text", dec.text, "Also print the circuit string to stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim);
    if (qv_cmd->parsed()) return cmd_qv(qv);
    if (seed_opt->count() > 0) dec.random_seed = seed;
    return cmd_decompose(dec);
  } catch (const UsageFailure& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
