#include "qlocate/harness.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qlocate/anneal.hpp"
#include "qlocate/baselines.hpp"
#include "qlocate/error.hpp"
#include "qlocate/metrics.hpp"
#include "qlocate/qaoa.hpp"
#include "qlocate/rng.hpp"
#include "qlocate/stats.hpp"
#include "qlocate/vqe.hpp"

#ifndef QLOCATE_VERSION
#define QLOCATE_VERSION "unknown"
#endif

namespace qlocate {

std::string version_string() { return QLOCATE_VERSION; }

// ---- config

Config Config::from_text(const std::string& text) {
  std::istringstream in(text);
  Config c;
  try {
    for (const auto& item : CLI::ConfigINI().from_config(in)) {
      if (item.name == "++" || item.name == "--") continue;
      std::string value;
      for (size_t k = 0; k < item.inputs.size(); ++k) value += (k ? "," : "") + item.inputs[k];
      c.values_[item.fullname()] = value;
    }
  } catch (const CLI::Error& e) {
    throw ConfigError(std::string("unreadable config: ") + e.what());
  }
  return c;
}

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

std::string Config::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config key " + key);
  return it->second;
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

namespace {

double parse_double(const std::string& key, const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError("key " + key + ": not a number: " + s);
  return v;
}

long parse_long(const std::string& key, const std::string& s) {
  long v = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError("key " + key + ": not an integer: " + s);
  return v;
}

}  // namespace

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? parse_double(key, get(key)) : fallback;
}

long Config::get_int(const std::string& key, long fallback) const {
  return has(key) ? parse_long(key, get(key)) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const auto v = get(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("key " + key + ": not a boolean: " + v);
}

std::vector<double> Config::get_list(const std::string& key, const std::vector<double>& fallback) const {
  if (!has(key)) return fallback;
  std::vector<double> out;
  std::stringstream ss(get(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(parse_double(key, item.substr(b, e - b + 1)));
  }
  if (out.empty()) throw ConfigError("key " + key + " lists no values");
  return out;
}

std::uint64_t Config::seed() const {
  if (!has("seed")) return 0;
  const auto s = get("seed");
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError("seed must be a non-negative integer");
  return v;
}

// ---- csv

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string CsvTable::to_string() const {
  std::string out;
  auto emit = [&out](const std::vector<std::string>& row) {
    for (size_t k = 0; k < row.size(); ++k) {
      if (k) out += ',';
      const auto& f = row[k];
      if (f.find_first_of(",\"\r\n") == std::string::npos) {
        out += f;
        continue;
      }
      out += '"';
      for (char ch : f) {
        if (ch == '"') out += '"';
        out += ch;
      }
      out += '"';
    }
    out += "\r\n";
  };
  emit(header);
  for (const auto& r : rows) emit(r);
  return out;
}

CsvTable CsvTable::parse(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> rec;
  std::string field;
  bool quoted = false, any = false;
  for (size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
      continue;
    }
    if (ch == '"') {
      if (!field.empty()) throw ConfigError("malformed CSV: quote inside an unquoted field");
      quoted = any = true;
    } else if (ch == ',') {
      rec.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (ch == '\r' || ch == '\n') {
      if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        rec.push_back(std::move(field));
        records.push_back(std::move(rec));
      }
      field.clear();
      rec.clear();
      any = false;
    } else {
      field += ch;
      any = true;
    }
  }
  if (quoted) throw ConfigError("malformed CSV: unterminated quote");
  if (any || !field.empty()) {
    rec.push_back(std::move(field));
    records.push_back(std::move(rec));
  }
  if (records.empty()) throw ConfigError("malformed CSV: no header");
  CsvTable t;
  t.header = std::move(records.front());
  for (size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != t.header.size()) {
      throw ConfigError("malformed CSV: row " + std::to_string(r) + " has " + std::to_string(records[r].size()) +
                        " fields, header has " + std::to_string(t.header.size()));
    }
    t.rows.push_back(std::move(records[r]));
  }
  return t;
}

size_t CsvTable::column(const std::string& name) const {
  for (size_t k = 0; k < header.size(); ++k) {
    if (header[k] == name) return k;
  }
  throw ConfigError("CSV has no column " + name);
}

const std::vector<std::pair<std::string, std::vector<std::string>>>& csv_schemas() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> schemas{
      {"encode", {"term", "i", "j", "coefficient"}},
      {"oracle", {"rows", "cols", "ambulances", "metric", "d_min", "optimal_count", "placements"}},
      {"qaoa", {"run_id", "p", "strategy", "mixer", "init", "ev", "r_approx", "p_feas", "p_gnd", "evals", "seed"}},
      {"vqe", {"run_id", "params", "layers", "method", "shots", "ev", "r_approx", "p_feas", "p_gnd", "evals", "seed"}},
      {"sa", {"grid", "algorithm", "restarts", "best", "frequency", "d_min", "ratio"}},
      {"tabu", {"grid", "algorithm", "restarts", "best", "frequency", "d_min", "ratio"}},
      {"anneal-sweep", {"lambda_ratio", "lambda", "p_gnd", "p_feas", "r_approx", "reads", "seed"}},
      {"anneal-sim", {"anneal_time", "p_gnd", "p_feas", "r_approx", "reads", "seed"}},
      {"tts", {"p_sol", "t_cycle", "tts"}},
      {"summarize", {"metric", "mean", "sd_of_mean", "error", "min", "max", "best_run_id"}},
  };
  return schemas;
}

const std::vector<std::string>& csv_schema(const std::string& algorithm) {
  for (const auto& [name, cols] : csv_schemas()) {
    if (name == algorithm) return cols;
  }
  throw ConfigError("unknown algorithm: " + algorithm);
}

// ---- problem and optimizer blocks

FacilityProblem facility_problem_from_config(const Config& config, std::optional<double> default_ratio) {
  std::string text;
  for (const auto& [key, value] : config.values()) {
    if (key.rfind("problem.", 0) != 0) continue;
    const auto k = key.substr(8);
    if (k == "preset" || k == "encoding" || k == "cardinality_penalty") continue;
    text += k + " = " + value + "\n";
  }
  if (default_ratio && !config.has("problem.lambda") && !config.has("problem.lambda_ratio")) {
    text += "lambda_ratio = " + format_number(*default_ratio) + "\n";
  }
  try {
    return problem_from_text(text);
  } catch (const std::invalid_argument&) {
    throw ConfigError("non-numeric value in [problem]");
  }
}

EncodedProblem encoded_problem_from_config(const Config& config) {
  if (config.has("problem.preset")) {
    const auto preset = config.get("problem.preset");
    if (preset.size() != 1) throw ConfigError("preset must be a single letter A-J");
    std::optional<double> lambda;
    if (config.has("problem.lambda")) lambda = config.get_double("problem.lambda", 0.0);
    return preset_problem(preset[0], lambda);
  }
  const auto p = facility_problem_from_config(config);
  const auto enc = config.get("problem.encoding", p.ambulances == 1 ? "complement" : "start-dest");
  if (enc == "complement") return encode_single_complement(p);
  if (enc == "start-dest") return encode_start_dest(p);
  if (enc == "position-linear") return encode_position_linear(p, config.get_bool("problem.cardinality_penalty", true));
  throw ConfigError("unknown encoding: " + enc);
}

OptimizerConfig optimizer_from_config(const Config& config) {
  const auto name = config.get("optimizer.name", "nelder-mead");
  if (name == "nelder-mead") {
    NelderMeadConfig c;
    c.max_iter = static_cast<int>(config.get_int("optimizer.max_iter", c.max_iter));
    c.f_tol = config.get_double("optimizer.f_tol", c.f_tol);
    c.x_tol = config.get_double("optimizer.x_tol", c.x_tol);
    c.init_simplex_scale = config.get_double("optimizer.simplex_scale", c.init_simplex_scale);
    return c;
  }
  if (name == "spsa") {
    SpsaConfig c;
    c.a = config.get_double("optimizer.a", c.a);
    c.c = config.get_double("optimizer.c", c.c);
    c.n_iter = static_cast<int>(config.get_int("optimizer.max_iter", c.n_iter));
    c.alpha = config.get_double("optimizer.alpha", c.alpha);
    c.gamma = config.get_double("optimizer.gamma", c.gamma);
    return c;
  }
  if (name == "bfgs") {
    FdQuasiNewtonConfig c;
    c.eps = config.get_double("optimizer.eps", c.eps);
    c.max_iter = static_cast<int>(config.get_int("optimizer.max_iter", c.max_iter));
    c.g_tol = config.get_double("optimizer.g_tol", c.g_tol);
    return c;
  }
  throw ConfigError("unknown optimizer: " + name);
}

// ---- runners

namespace {

using Row = std::vector<std::string>;

std::string num(double v) { return format_number(v); }
std::string num(long v) { return std::to_string(v); }
std::string num(int v) { return std::to_string(v); }
std::string num(std::uint64_t v) { return std::to_string(v); }

Row metric_fields(const RunMetrics& m) { return {num(m.ev), num(m.r_approx), num(m.p_feas), num(m.p_gnd)}; }

Row join(Row a, const Row& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

int positive(const Config& c, const std::string& key, long fallback) {
  const long v = c.get_int(key, fallback);
  if (v < 1) throw ConfigError(key + " must be positive");
  return static_cast<int>(v);
}

CsvTable run_encode(const Config& config) {
  const auto ep = encoded_problem_from_config(config);
  CsvTable t{csv_schema("encode"), {}};
  t.rows.push_back({"offset", "", "", num(ep.model.offset())});
  for (auto [i, c] : ep.model.linear()) t.rows.push_back({"linear", num(i), "", num(c)});
  for (auto [ij, c] : ep.model.quadratic()) t.rows.push_back({"quadratic", num(ij.first), num(ij.second), num(c)});
  return t;
}

CsvTable run_oracle(const Config& config) {
  const auto p = facility_problem_from_config(config);
  const auto opt = exact_facility_optimum(p);
  std::string placements;
  for (size_t k = 0; k < opt.placements.size(); ++k) {
    if (k) placements += ';';
    for (size_t j = 0; j < opt.placements[k].size(); ++j) placements += (j ? " " : "") + num(opt.placements[k][j]);
  }
  CsvTable t{csv_schema("oracle"), {}};
  t.rows.push_back({num(p.geometry.rows), num(p.geometry.cols), num(p.ambulances), to_string(p.metric),
                    num(opt.d_min), num(static_cast<int>(opt.placements.size())), placements});
  return t;
}

MixerSpec mixer_from_config(const Config& config, const Encoding& enc) {
  const auto name = config.get("qaoa.mixer", "x");
  if (name == "x") return MixerSpec::x();
  if (name == "xy") {
    std::vector<std::vector<int>> rings;
    for (const auto& t : enc.hamming_targets) rings.push_back(t.qubits);
    return MixerSpec::xy(rings);
  }
  if (name == "3xy") {
    return MixerSpec::three_xy(enc, static_cast<int>(config.get_int("qaoa.betas", 1)),
                               static_cast<int>(config.get_int("qaoa.gammas", 1)));
  }
  throw ConfigError("unknown mixer: " + name);
}

InitSpec init_from_config(const Config& config, const Encoding& enc, std::uint64_t seed) {
  const auto name = config.get("qaoa.init", "uniform");
  if (name == "uniform") return InitSpec::uniform();
  if (name == "dicke") {
    if (enc.hamming_targets.size() == 1 && static_cast<int>(enc.hamming_targets[0].qubits.size()) == enc.n_qubits) {
      return InitSpec::dicke(enc.hamming_targets[0].weight);
    }
    return InitSpec::dicke_blocks();
  }
  if (name == "dicke-blocks") return InitSpec::dicke_blocks();
  if (name == "pure") return InitSpec::pure(config.get("qaoa.bitstring"));
  if (name == "random-feasible") return InitSpec::random_feasible(derive_seed(seed, 0xfea5));
  throw ConfigError("unknown initial state: " + name);
}

CsvTable run_qaoa(const Config& config) {
  const auto ep = encoded_problem_from_config(config);
  const auto seed = config.seed();
  const QaoaEngine engine(ep, mixer_from_config(config, ep.encoding), init_from_config(config, ep.encoding, seed));
  const auto optimizer = optimizer_from_config(config);
  const int restarts = positive(config, "qaoa.restarts", 10);
  const auto strategy = config.get("qaoa.strategy", "none");
  const int p = strategy == "none" ? positive(config, "qaoa.p", 1) : 1;
  const auto mixer = engine.mixer().name();
  const auto init = engine.init().name();

  CsvTable t{csv_schema("qaoa"), {}};
  const auto res = random_restart_search(engine, p, restarts, optimizer, seed);
  for (const auto& run : res.runs) {
    t.rows.push_back(join({num(run.run_id), num(p), "random", mixer, init}, metric_fields(run.metrics)));
    t.rows.back().push_back(num(run.metrics.evals));
    t.rows.back().push_back(num(run.seed));
  }
  const auto& s = res.summary;
  long evals = 0;
  for (const auto& run : res.runs) evals += run.metrics.evals;
  t.rows.push_back({"summary", num(p), "random", mixer, init, num(s.ev.mean), num(s.r_approx.mean),
                    num(s.p_feas.mean), num(s.p_gnd.mean), num(evals), num(seed)});
  if (strategy == "none") return t;

  const int p_max = positive(config, "qaoa.p_max", 10);
  const auto& best = res.runs[static_cast<size_t>(s.best_run)];
  std::vector<Strategy> strategies;
  if (strategy == "all") {
    strategies = {Strategy::Interp, Strategy::Extrap1, Strategy::Extrap2};
  } else {
    try {
      strategies = {strategy_from_string(strategy)};
    } catch (const InputError& e) {
      throw ConfigError(e.what());
    }
  }
  for (auto st : strategies) {
    for (const auto& step :
         increasing_p_schedule(engine, st, best.best, p_max, optimizer, derive_seed(seed, static_cast<std::uint64_t>(restarts)))) {
      t.rows.push_back(join({"schedule", num(step.p), to_string(st), mixer, init}, metric_fields(step.metrics)));
      t.rows.back().push_back(num(step.metrics.evals));
      t.rows.back().push_back(num(best.seed));
    }
  }
  return t;
}

CsvTable run_vqe(const Config& config) {
  const auto ep = encoded_problem_from_config(config);
  const auto seed = config.seed();
  const VqeAnsatz ansatz{ep.encoding.n_qubits, config.get_bool("vqe.initial_layer", false),
                         static_cast<int>(config.get_int("vqe.layers", 1))};
  const auto method = config.get("vqe.method", "sv");
  if (method != "sv" && method != "sample" && method != "cone") throw ConfigError("unknown vqe method: " + method);
  const long shots = method == "sv" ? 0 : positive(config, "vqe.shots", 1000);
  const int restarts = positive(config, "vqe.restarts", 10);
  const auto optimizer = optimizer_from_config(config);
  const FeasibleOracle oracle(ep.encoding, ep.model);
  const auto ising = qubo_to_ising(ep.model);
  const auto diag = energy_table(ep.model);

  CsvTable t{csv_schema("vqe"), {}};
  std::vector<RunMetrics> all;
  for (int r = 0; r < restarts; ++r) {
    const auto run_seed = derive_seed(seed, static_cast<std::uint64_t>(r));
    auto rng = make_rng(run_seed);
    std::vector<double> x0(static_cast<size_t>(ansatz.param_count()));
    for (double& v : x0) v = 2 * std::numbers::pi * uniform01(rng);
    std::uint64_t calls = 0;
    Objective f = [&](const std::vector<double>& th) {
      const auto call_seed = derive_seed(run_seed, 2 + calls++);
      if (method == "sample") return ev_all_qubit_sampling(ansatz, th, ep.model, shots, call_seed).value;
      if (method == "cone") return ev_causal_cone_sampling(ansatz, th, ising, shots, call_seed).value;
      return ev_statevector(ansatz, th, ep.model);
    };
    const auto res = minimize(f, x0, optimizer, derive_seed(run_seed, 1));
    auto m = oracle.evaluate(apply_ansatz(ansatz, res.x_best), diag);
    m.evals = res.evals;
    all.push_back(m);
    t.rows.push_back(join({num(r), num(ansatz.param_count()), num(ansatz.entangling_layers), method, num(shots)},
                          metric_fields(m)));
    t.rows.back().push_back(num(m.evals));
    t.rows.back().push_back(num(run_seed));
  }
  const auto s = summarize_runs(all);
  long evals = 0;
  for (const auto& m : all) evals += m.evals;
  t.rows.push_back({"summary", num(ansatz.param_count()), num(ansatz.entangling_layers), method, num(shots),
                    num(s.ev.mean), num(s.r_approx.mean), num(s.p_feas.mean), num(s.p_gnd.mean), num(evals), num(seed)});
  return t;
}

// A ratio of 1 leaves infeasible states below the optimum of every grid in the table.
constexpr double kBaselineRatio = 3.0;

CsvTable run_baseline(const std::string& algorithm, const Config& config) {
  const auto p = facility_problem_from_config(config, kBaselineRatio);
  const auto ep = encode_for_sweep(p);
  const int restarts = positive(config, "baseline.restarts", 100);
  Heuristic solver;
  if (algorithm == "sa") {
    SimAnnealConfig c;
    c.sweeps = positive(config, "baseline.sweeps", c.sweeps);
    c.beta_initial = config.get_double("baseline.beta_initial", c.beta_initial);
    c.beta_final = config.get_double("baseline.beta_final", c.beta_final);
    solver = [c](const CompiledQubo& q, std::uint64_t s) { return simulated_annealing(q, c, s); };
  } else {
    TabuConfig c;
    c.tenure = static_cast<int>(config.get_int("baseline.tenure", c.tenure));
    c.max_iter = static_cast<int>(config.get_int("baseline.max_iter", c.max_iter));
    solver = [c](const CompiledQubo& q, std::uint64_t s) { return tabu_search(q, c, s); };
  }
  const double d_min = exact_facility_optimum(p).d_min;
  const auto st = restart_harness(solver, ep, restarts, config.seed(), d_min);
  CsvTable t{csv_schema(algorithm), {}};
  t.rows.push_back({num(p.geometry.rows) + "x" + num(p.geometry.cols), algorithm, num(restarts),
                    st.best_distance ? num(*st.best_distance) : "", num(st.best_frequency), num(d_min),
                    st.ratio ? num(*st.ratio) : ""});
  return t;
}

CsvTable run_anneal_sweep(const Config& config) {
  const auto p = facility_problem_from_config(config);
  const auto ratios = config.get_list("anneal.ratios", {0.6, 0.8, 1.0, 1.2, 1.4, 1.6, 2.0, 3.0, 4.0, 10.0});
  const int reads = positive(config, "anneal.reads", 1000);
  const auto sampler_name = config.get("anneal.sampler", "sa");
  AnnealSampler sampler;
  if (sampler_name == "sa") {
    SimAnnealConfig c;
    c.sweeps = positive(config, "anneal.sweeps", c.sweeps);
    c.beta_initial = config.get_double("anneal.beta_initial", c.beta_initial);
    c.beta_final = config.get_double("anneal.beta_final", c.beta_final);
    sampler = c;
  } else if (sampler_name == "toy") {
    sampler = ToyDynamicsSampler{AnnealSchedule::forward(config.get_double("anneal.time", 10.0),
                                                         positive(config, "anneal.steps", 100))};
  } else {
    throw ConfigError("unknown sampler: " + sampler_name);
  }
  const auto seed = config.seed();
  CsvTable t{csv_schema("anneal-sweep"), {}};
  for (const auto& pt : anneal_parameter_sweep(p, ratios, sampler, reads, seed)) {
    t.rows.push_back({num(pt.lambda_ratio), num(pt.lambda), num(pt.metrics.p_gnd), num(pt.metrics.p_feas),
                      num(pt.metrics.r_approx), num(reads), num(seed)});
  }
  return t;
}

CsvTable run_anneal_sim(const Config& config) {
  const auto ep = encoded_problem_from_config(config);
  const auto times = config.get_list("anneal.times", {0.5, 1, 2, 5, 10, 20, 50});
  const int steps = positive(config, "anneal.steps", 100);
  const int reads = positive(config, "anneal.reads", 1000);
  const auto seed = config.seed();
  const FeasibleOracle oracle(ep.encoding, ep.model);
  const auto ising = qubo_to_ising(ep.model);
  CsvTable t{csv_schema("anneal-sim"), {}};
  for (size_t k = 0; k < times.size(); ++k) {
    const auto res = simulate_forward_anneal(ising, AnnealSchedule::forward(times[k], steps));
    const auto m = oracle.evaluate(sample(res.state, reads, derive_seed(seed, k)));
    t.rows.push_back({num(times[k]), num(m.p_gnd), num(m.p_feas), num(m.r_approx), num(reads), num(seed)});
  }
  return t;
}

CsvTable run_tts(const Config& config) {
  const auto ps = config.get_list("tts.p_sol", {0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.99});
  const double t_cycle = config.get_double("tts.t_cycle", 100.0);
  CsvTable t{csv_schema("tts"), {}};
  for (double p : ps) t.rows.push_back({num(p), num(t_cycle), num(tts(p, t_cycle))});
  return t;
}

}  // namespace

ExperimentOutput run_experiment(const std::string& algorithm, const Config& config) {
  const auto t0 = std::chrono::steady_clock::now();
  CsvTable table;
  try {
    if (algorithm == "encode") {
      table = run_encode(config);
    } else if (algorithm == "oracle") {
      table = run_oracle(config);
    } else if (algorithm == "qaoa") {
      table = run_qaoa(config);
    } else if (algorithm == "vqe") {
      table = run_vqe(config);
    } else if (algorithm == "sa" || algorithm == "tabu") {
      table = run_baseline(algorithm, config);
    } else if (algorithm == "anneal-sweep") {
      table = run_anneal_sweep(config);
    } else if (algorithm == "anneal-sim") {
      table = run_anneal_sim(config);
    } else if (algorithm == "tts") {
      table = run_tts(config);
    } else {
      throw ConfigError("unknown algorithm: " + algorithm);
    }
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  nlohmann::json manifest{{"version", version_string()},
                          {"algorithm", algorithm},
                          {"seed", config.seed()},
                          {"config", config.values()},
                          {"columns", table.header},
                          {"rows", table.rows.size()},
                          {"wall_time_s", wall}};
  return {std::move(table), manifest.dump(2) + "\n"};
}

CsvTable summarize(const CsvTable& table) {
  std::optional<size_t> id_col;
  for (size_t k = 0; k < table.header.size(); ++k) {
    if (table.header[k] == "run_id") id_col = k;
  }
  auto is_number = [](const std::string& s, double& v) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc() && ptr == s.data() + s.size();
  };
  std::vector<const std::vector<std::string>*> data;
  std::vector<std::string> ids;
  for (size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.size() != table.header.size()) throw ConfigError("malformed CSV: ragged row");
    double v = 0;
    if (id_col && !is_number(row[*id_col], v)) continue;
    data.push_back(&row);
    ids.push_back(id_col ? row[*id_col] : std::to_string(r));
  }
  if (data.empty()) throw ConfigError("CSV has no data rows");

  std::vector<std::pair<std::string, std::vector<double>>> metrics;
  for (size_t k = 0; k < table.header.size(); ++k) {
    const auto& name = table.header[k];
    if (name == "run_id" || name == "seed") continue;
    std::vector<double> col;
    bool numeric = true;
    for (const auto* row : data) {
      double v = 0;
      if (!is_number((*row)[k], v)) {
        numeric = false;
        break;
      }
      col.push_back(v);
    }
    if (numeric) metrics.emplace_back(name, std::move(col));
  }

  // best run: lowest EV, else lowest best-found value, else highest p_gnd
  int best = 0;
  for (const auto& [name, col] : metrics) {
    if (name == "ev") {
      best = summarize_values(col).argmin;
      break;
    }
  }
  if (std::none_of(metrics.begin(), metrics.end(), [](const auto& m) { return m.first == "ev"; })) {
    for (const auto& [name, col] : metrics) {
      if (name == "best") best = summarize_values(col).argmin;
      if (name == "p_gnd") best = summarize_values(col).argmax;
    }
  }

  CsvTable out{csv_schema("summarize"), {}};
  for (const auto& [name, col] : metrics) {
    const auto s = summarize_values(col);
    out.rows.push_back({name, format_number(s.mean), format_number(s.sd_of_mean), format_number(s.error),
                        format_number(s.min), format_number(s.max), ids[static_cast<size_t>(best)]});
  }
  return out;
}

}  // namespace qlocate
