// Acceptance suite. `acceptance` runs every criterion, `acceptance N` runs one.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qlocate/anneal.hpp"
#include "qlocate/baselines.hpp"
#include "qlocate/encoders.hpp"
#include "qlocate/harness.hpp"
#include "qlocate/qaoa.hpp"
#include "qlocate/rng.hpp"
#include "qlocate/vqe.hpp"

using namespace qlocate;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Detail {
 public:
  template <typename T>
  Detail& operator<<(const T& v) {
    out_ << v;
    return *this;
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> column(const CsvTable& t, const std::string& name, bool numeric_ids_only = true) {
  std::vector<double> out;
  const auto c = t.column(name);
  for (const auto& row : t.rows) {
    if (numeric_ids_only && (row[0].empty() || !std::isdigit(static_cast<unsigned char>(row[0][0])))) continue;
    out.push_back(std::stod(row[c]));
  }
  return out;
}

std::vector<double> random_angles(int k, std::uint64_t seed) {
  auto rng = make_rng(seed);
  std::vector<double> t(static_cast<size_t>(k));
  for (double& v : t) v = 2 * std::numbers::pi * uniform01(rng);
  return t;
}

// ---- 1: problem-A energy table

Outcome table_three() {
  const std::vector<double> lambdas{0, 10, 20, 30, 40, 100};
  // nullopt marks the excluded cell
  const std::vector<std::pair<std::vector<std::string>, std::vector<std::optional<double>>>> rows{
      {{"11111"}, {-50, -200, -350, -500, -650, -1550}},
      {{"11011"}, {-40, -200, -360, -520, -680, -1640}},
      {{"10111", "11101"}, {-35, -195, -355, -515, -675, -1635}},
      {{"01111", "11110"}, {std::nullopt, -180, -340, -500, -660, -1620}},
  };
  const std::vector<std::optional<double>> gap_high{std::nullopt, -20, -10, 0, 10, 70};
  const std::vector<std::optional<double>> gap_low{-10, 0, 10, 20, 30, 90};
  const auto base = preset_problem('A').encoding;
  int checked = 0, wrong = 0;
  for (size_t k = 0; k < lambdas.size(); ++k) {
    const auto model = reencode(base, lambdas[k]).model;
    for (const auto& [states, cells] : rows) {
      if (!cells[k]) continue;
      for (const auto& s : states) {
        ++checked;
        wrong += energy_qubo(model, s) != *cells[k];
      }
    }
    const double all_ones = energy_qubo(model, "11111");
    if (gap_high[k]) {
      ++checked;
      wrong += all_ones - energy_qubo(model, "01111") != *gap_high[k];
    }
    ++checked;
    wrong += all_ones - energy_qubo(model, "11011") != *gap_low[k];
  }
  return {wrong == 0, (Detail() << checked - wrong << "/" << checked << " cells exact").str()};
}

// ---- 2: exact oracle on square grids

Outcome table_one() {
  const std::vector<std::pair<int, double>> expected{{5, 65},     {6, 134},    {7, 252},    {8, 432},   {9, 684},
                                                      {10, 1038}, {11, 1529}, {12, 2172}, {15, 5336}, {20, 16700}};
  const auto t0 = std::chrono::steady_clock::now();
  Detail d;
  bool ok = true;
  for (const auto& [side, want] : expected) {
    FacilityProblem p;
    p.geometry = Geometry::grid(side, side);
    p.ambulances = 2;
    const double got = exact_facility_optimum(p).d_min;
    if (got != want) {
      ok = false;
      d << side << "x" << side << " got " << got << " want " << want << "; ";
    }
  }
  const double t = seconds_since(t0);
  ok = ok && t < 60.0;
  d << "time " << t << " s";
  return {ok, d.str()};
}

// ---- 3: heuristic baselines on 5x5

Outcome heuristics() {
  const auto t0 = std::chrono::steady_clock::now();
  FacilityProblem p;
  p.geometry = Geometry::grid(5, 5);
  p.ambulances = 2;
  p.lambda_ratio = 3.0;
  const auto ep = encode_for_sweep(p);
  const double d_min = exact_facility_optimum(p).d_min;
  const SimAnnealConfig sa_cfg;
  const TabuConfig tabu_cfg;
  const auto tabu = restart_harness(
      [&](const CompiledQubo& q, std::uint64_t s) { return tabu_search(q, tabu_cfg, s); }, ep, 10000, 1, d_min);
  const auto sa = restart_harness(
      [&](const CompiledQubo& q, std::uint64_t s) { return simulated_annealing(q, sa_cfg, s); }, ep, 10000, 2, d_min);
  const double t = seconds_since(t0);
  const bool found = tabu.best_distance && *tabu.best_distance == 65.0;
  const bool sa_ok = sa.ratio && *sa.ratio >= 1.0;
  const bool order = tabu.ratio && sa.ratio && *tabu.ratio <= *sa.ratio;
  Detail d;
  d << "tabu best " << (tabu.best_distance ? *tabu.best_distance : -1) << " freq " << tabu.best_frequency
    << ", sa ratio " << (sa.ratio ? *sa.ratio : -1) << ", time " << t << " s";
  return {found && sa_ok && order && t < 600.0, d.str()};
}

// ---- 4: mixer comparison on problem A

std::vector<RunMetrics> restart_metrics(const QaoaEngine& engine, int p, int restarts, std::uint64_t seed) {
  const auto res = random_restart_search(engine, p, restarts, NelderMeadConfig{}, seed);
  std::vector<RunMetrics> out;
  for (const auto& r : res.runs) out.push_back(r.metrics);
  return out;
}

Outcome mixers() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto a = preset_problem('A', 40.0);
  const QaoaEngine xy(a, MixerSpec::xy({{0, 1, 2, 3, 4}}), InitSpec::dicke(4));
  const QaoaEngine x(a, MixerSpec::x(), InitSpec::uniform());
  std::vector<double> xy_gnd, x_gnd;
  double worst_feas = 0.0;
  for (const auto& m : restart_metrics(xy, 5, 100, 11)) {
    xy_gnd.push_back(m.p_gnd);
    worst_feas = std::max(worst_feas, std::abs(m.p_feas - 1.0));
  }
  for (const auto& m : restart_metrics(x, 5, 100, 12)) x_gnd.push_back(m.p_gnd);
  const double t = seconds_since(t0);
  const double mxy = mean(xy_gnd), mx = mean(x_gnd);
  const bool ok = mxy >= 0.8 && worst_feas <= 1e-10 && mx >= 0.05 && mx <= 0.3 && mxy >= 3 * mx && t < 900.0;
  Detail d;
  d << "xy p_gnd " << mxy << ", max |p_feas-1| " << worst_feas << ", x p_gnd " << mx << ", time " << t << " s";
  return {ok, d.str()};
}

// ---- 5: penalty threshold trend

Outcome lambda_threshold() {
  const auto t0 = std::chrono::steady_clock::now();
  const Index all_ones = from_bitstring("11111");
  std::map<double, double> p_ones, p_gnd;
  for (double lambda : {0.0, 40.0, 100.0}) {
    const QaoaEngine engine(preset_problem('A', lambda), MixerSpec::x(), InitSpec::uniform());
    const auto res = random_restart_search(engine, 5, 100, NelderMeadConfig{}, 21);
    std::vector<double> ones, gnd;
    for (const auto& r : res.runs) {
      ones.push_back(engine.run(r.best).probabilities()[all_ones]);
      gnd.push_back(r.metrics.p_gnd);
    }
    p_ones[lambda] = mean(ones);
    p_gnd[lambda] = mean(gnd);
  }
  const double t = seconds_since(t0);
  const bool ok = p_ones[0.0] >= 5 * p_ones[100.0] && p_gnd[40.0] > p_gnd[0.0] && t < 1200.0;
  Detail d;
  d << "P(11111) " << p_ones[0.0] << " at 0 vs " << p_ones[100.0] << " at 100, p_gnd " << p_gnd[40.0] << " at 40 vs "
    << p_gnd[0.0] << " at 0, time " << t << " s";
  return {ok, d.str()};
}

// ---- 6: increasing-p schedules on problem C

Outcome increasing_p() {
  const auto t0 = std::chrono::steady_clock::now();
  const QaoaEngine engine(preset_problem('C'), MixerSpec::x(), InitSpec::uniform());
  const auto seeds = random_restart_search(engine, 1, 100, NelderMeadConfig{}, 31);
  const auto& best = seeds.runs[static_cast<size_t>(seeds.summary.best_run)];
  double best_gain = 0.0, worst_rise = -1e300;
  Detail d;
  for (auto st : {Strategy::Interp, Strategy::Extrap1, Strategy::Extrap2}) {
    const auto steps = increasing_p_schedule(engine, st, best.best, 10, NelderMeadConfig{}, 32);
    for (size_t k = 1; k < steps.size(); ++k) {
      worst_rise = std::max(worst_rise, steps[k].metrics.ev - steps[k - 1].metrics.ev);
    }
    const double gain = steps.back().metrics.p_gnd / best.metrics.p_gnd;
    best_gain = std::max(best_gain, gain);
    d << to_string(st) << " x" << gain << ", ";
  }
  const double t = seconds_since(t0);
  d << "seed p_gnd " << best.metrics.p_gnd << ", max EV rise " << worst_rise << ", time " << t << " s";
  return {best_gain >= 3.0 && worst_rise <= 1e-9 && t < 1800.0, d.str()};
}

// ---- 7: three-ring structure on problem B

Outcome three_xy() {
  const auto b = preset_problem('B');
  const FeasibleOracle oracle(b.encoding, b.model);
  const double targets = hamming_target_count(b.encoding);
  const int ground = oracle.ground_count();
  const QaoaEngine start(b, MixerSpec::three_xy(b.encoding, 1, 1), InitSpec::dicke_blocks());
  const double uniform_gnd = start.metrics(start.initial_state()).p_gnd;

  const auto inside = hamming_target_states(b.encoding);
  double leakage = 0.0;
  for (auto [betas, gammas] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {3, 1}, {3, 3}}) {
    const QaoaEngine e(b, MixerSpec::three_xy(b.encoding, betas, gammas), InitSpec::dicke_blocks());
    for (std::uint64_t s = 0; s < 3; ++s) {
      const auto angles = Angles::unflatten(random_angles(e.dimension(2), s), 2, betas, gammas);
      const auto probs = e.run(angles).probabilities();
      double kept = 0.0;
      for (Index x : inside) kept += probs[x];
      leakage = std::max(leakage, std::abs(1.0 - kept));
    }
  }
  const auto p1 = random_restart_search(start, 1, 200, NelderMeadConfig{}, 41);
  const auto p2 = random_restart_search(start, 2, 200, NelderMeadConfig{}, 42);
  const bool ok = targets == 1120 && ground == 12 && std::abs(uniform_gnd - 12.0 / 1120.0) <= 1e-12 &&
                  leakage <= 1e-12 && p2.summary.ev.min <= p1.summary.ev.min;
  Detail d;
  d << "targets " << targets << ", ground " << ground << ", uniform p_gnd " << uniform_gnd << ", leakage " << leakage
    << ", best EV p=1 " << p1.summary.ev.min << " p=2 " << p2.summary.ev.min;
  return {ok, d.str()};
}

// ---- 8: VQE on problem A

Outcome vqe() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string base =
      "seed = 5\n[problem]\npreset = A\nlambda = 15\n[vqe]\nlayers = 1\ninitial_layer = false\nmethod = sv\n"
      "restarts = 100\n";
  const auto qn = run_experiment("vqe", Config::from_text(base + "[optimizer]\nname = bfgs\n")).table;
  const auto gnd = column(qn, "p_gnd");
  const auto ev = column(qn, "ev");
  const size_t best = static_cast<size_t>(std::min_element(ev.begin(), ev.end()) - ev.begin());

  const auto spsa =
      run_experiment("vqe", Config::from_text(base + "[optimizer]\nname = spsa\na = 0.1\nc = 0.1\nmax_iter = 100\n"))
          .table;
  const double c_min = enumerate_spectrum(preset_problem('A', 15.0).model).front().energy;
  std::vector<double> ratios;
  for (double e : column(spsa, "ev")) ratios.push_back(e / c_min);
  const double t = seconds_since(t0);
  const double mg = mean(gnd), mr = mean(ratios);
  const bool ok = gnd.size() == 100 && mg >= 0.7 && mg <= 1.0 && gnd[best] >= 0.99 && mr >= 0.85 && t < 1800.0;
  Detail d;
  d << "bfgs mean p_gnd " << mg << ", best-run p_gnd " << gnd[best] << ", spsa EV/C_min " << mr << ", time " << t
    << " s";
  return {ok, d.str()};
}

// ---- 9: sampled estimators

Outcome estimators() {
  const auto a = preset_problem('A');
  const auto ising = qubo_to_ising(a.model);
  const VqeAnsatz ansatz{5, false, 1};
  double worst_all = 0.0, worst_cone = 0.0, worst_marginal = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto theta = random_angles(ansatz.param_count(), derive_seed(91, s));
    const double exact = ev_statevector(ansatz, theta, a.model);
    const auto all = ev_all_qubit_sampling(ansatz, theta, a.model, 100000, derive_seed(92, s));
    const auto cone = ev_causal_cone_sampling(ansatz, theta, ising, 100000, derive_seed(93, s));
    worst_all = std::max(worst_all, std::abs(all.value - exact) / all.std_error);
    worst_cone = std::max(worst_cone, std::abs(cone.value - exact) / cone.std_error);
    const auto full = apply_ansatz(ansatz, theta);
    for (int i = 0; i < ansatz.n; ++i) {
      for (int j = i; j < ansatz.n; ++j) {
        const auto term = i == j ? std::vector<int>{i} : std::vector<int>{i, j};
        const auto reduced = cone_distribution(causal_cone(ansatz, term), theta);
        const auto direct = marginal(full, term);
        for (size_t k = 0; k < reduced.size(); ++k) {
          worst_marginal = std::max(worst_marginal, std::abs(reduced[k] - direct[k]));
        }
      }
    }
  }
  Detail d;
  d << "max deviation " << worst_all << " SE all-qubit, " << worst_cone << " SE cone, marginal " << worst_marginal;
  return {worst_all <= 5 && worst_cone <= 5 && worst_marginal <= 1e-10, d.str()};
}

// ---- 10: QUBO and Ising forms

Outcome qubo_ising() {
  double worst = 0.0;
  for (int n = 1; n <= 10; ++n) {
    auto rng = make_rng(derive_seed(101, static_cast<std::uint64_t>(n)));
    QuboModel q(n);
    q.add_offset(4 * uniform01(rng) - 2);
    for (int i = 0; i < n; ++i) {
      q.add_linear(i, 10 * uniform01(rng) - 5);
      for (int j = i + 1; j < n; ++j) q.add_quadratic(i, j, 10 * uniform01(rng) - 5);
    }
    const auto is = qubo_to_ising(q);
    const auto back = ising_to_qubo(is);
    for (Index x = 0; x < (Index{1} << n); ++x) {
      const double e = energy_qubo(q, x);
      worst = std::max({worst, std::abs(energy_ising(is, to_spins(x, n)) - e), std::abs(energy_qubo(back, x) - e)});
    }
  }
  QuboModel edge(2);
  edge.add_quadratic(0, 1, 1.0);
  const auto is = qubo_to_ising(edge);
  const bool coeffs = is.J().size() == 1 && is.J().at({0, 1}) == 0.25 && is.h().at(0) == -0.25 &&
                      is.h().at(1) == -0.25 && is.offset() == 0.25 && energy_ising(is, std::vector<int>{-1, -1}) == 1.0;
  Detail d;
  d << "max deviation " << worst << ", single edge " << (coeffs ? "exact" : "wrong");
  return {worst <= 1e-12 && coeffs, d.str()};
}

// ---- 11: closed forms

Outcome schedules() {
  const double t99 = tts(0.99, 100.0);
  const double t50 = tts(0.5, 100.0);
  const auto [step0, eps0] = spsa_schedules(SpsaConfig{0.1, 0.1, 100, 0.602, 0.101}, 0);
  const bool ok = t99 == 100.0 && std::abs(t50 - 664.4) <= 0.1 && std::abs(step0 - 0.0659) <= 1e-4 && eps0 == 0.1;
  Detail d;
  d << "tts(0.99) " << t99 << ", tts(0.5) " << t50 << ", step0 " << step0 << ", eps0 " << eps0;
  return {ok, d.str()};
}

// ---- 12: toy anneal dynamics

Outcome anneal_dynamics() {
  int better = 0;
  for (std::uint64_t t = 0; t < 10; ++t) {
    auto rng = make_rng(derive_seed(5, t));
    IsingModel m(4);
    for (int i = 0; i < 4; ++i) m.add_field(i, 2 * uniform01(rng) - 1);
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) m.add_coupling(i, j, 2 * uniform01(rng) - 1);
    }
    const double fast = simulate_forward_anneal(m, AnnealSchedule::forward(0.5, 100)).p_gnd;
    const double slow = simulate_forward_anneal(m, AnnealSchedule::forward(50.0, 500)).p_gnd;
    better += slow >= fast;
  }
  IsingModel two(2);
  two.add_field(0, -1);
  two.add_field(1, -1);
  const double instant = simulate_forward_anneal(two, AnnealSchedule::forward(0.0, 1)).p_gnd;
  Detail d;
  d << better << "/10 improved, T=0 p_gnd " << instant;
  return {better >= 9 && instant == 0.25, d.str()};
}

// ---- 13: penalty sweep with the classical stand-in

Outcome anneal_sweep() {
  FacilityProblem p;
  p.geometry = Geometry::grid(3, 2);
  p.ambulances = 2;
  const auto pts = anneal_parameter_sweep(p, {1.0, 10.0}, SimAnnealConfig{}, 4000, 131);
  Detail d;
  d << "p_gnd " << pts[0].metrics.p_gnd << " at ratio 1, " << pts[1].metrics.p_gnd << " at ratio 10";
  return {pts[0].metrics.p_gnd >= 2 * pts[1].metrics.p_gnd, d.str()};
}

// ---- 14: gain factors on real runs

Outcome gains() {
  double worst = 0.0;
  int runs = 0, degenerate = 0;
  auto check = [&](const EncodedProblem& ep, MixerSpec mixer, InitSpec init, Strategy st, std::uint64_t seed) {
    const QaoaEngine reference(ep, MixerSpec::x(), InitSpec::uniform());
    const QaoaEngine engine(ep, std::move(mixer), std::move(init));
    const auto uniform = random_restart_search(reference, 1, 10, NelderMeadConfig{}, seed);
    const auto seeded = random_restart_search(engine, 1, 10, NelderMeadConfig{}, seed + 1);
    const auto& u = uniform.runs[static_cast<size_t>(uniform.summary.best_run)].metrics;
    const auto& best = seeded.runs[static_cast<size_t>(seeded.summary.best_run)];
    const auto init_metrics = engine.metrics(engine.initial_state());
    const auto steps = increasing_p_schedule(engine, st, best.best, 4, NelderMeadConfig{}, seed + 2);
    const auto g = gain_decomposition(u, init_metrics, best.metrics, steps.back().metrics);
    worst = std::max(worst, std::abs(g.overall - g.product()) / std::max(1.0, std::abs(g.overall)));
    ++runs;
    degenerate += g.degenerate;
  };
  const auto a = preset_problem('A');
  const auto c = preset_problem('C');
  check(a, MixerSpec::x(), InitSpec::uniform(), Strategy::Interp, 141);
  check(a, MixerSpec::xy({{0, 1, 2, 3, 4}}), InitSpec::dicke(4), Strategy::Extrap1, 142);
  check(c, MixerSpec::x(), InitSpec::uniform(), Strategy::Extrap2, 143);
  check(c, MixerSpec::xy({{0, 1, 2, 3, 4, 5, 6, 7}}), InitSpec::dicke(2), Strategy::Interp, 144);
  Detail d;
  d << runs << " runs, " << degenerate << " degenerate, max relative deviation " << worst;
  return {worst <= 1e-9, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::function<Outcome()>> criteria{
      {1, table_three},  {2, table_one},         {3, heuristics}, {4, mixers},   {5, lambda_threshold},
      {6, increasing_p}, {7, three_xy},          {8, vqe},        {9, estimators}, {10, qubo_ising},
      {11, schedules},   {12, anneal_dynamics}, {13, anneal_sweep}, {14, gains},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::stoi(argv[i]));
  if (selected.empty()) {
    for (const auto& [k, fn] : criteria) selected.push_back(k);
  }
  int failed = 0;
  for (int k : selected) {
    const auto it = criteria.find(k);
    if (it == criteria.end()) {
      std::printf("criterion %d unknown\n", k);
      return 2;
    }
    Outcome o;
    try {
      o = it->second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %d %s (%s)\n", k, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
