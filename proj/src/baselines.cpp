#include "qlocate/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qlocate/error.hpp"
#include "qlocate/rng.hpp"

namespace qlocate {

double facility_cost(const FacilityProblem& problem, const std::vector<int>& positions) {
  double total = 0.0;
  for (int l = 0; l < problem.geometry.nodes(); ++l) {
    double best = std::numeric_limits<double>::infinity();
    for (int p : positions) best = std::min(best, metric_distance(problem.geometry, problem.metric, l, p));
    total += best;
  }
  return total;
}

FacilityOptimum exact_facility_optimum(const FacilityProblem& problem) {
  const int L = problem.geometry.nodes();
  const int m = problem.ambulances;
  if (L > kFacilityNodeCap) throw CapacityError("more than " + std::to_string(kFacilityNodeCap) + " nodes");
  if (m < 1 || m > L) throw InputError("ambulance count must lie in [1, nodes]");
  if (binomial(L, m) > 5e7) throw CapacityError("too many position sets to enumerate");
  const auto d = distance_matrix(problem);

  FacilityOptimum out;
  out.d_min = std::numeric_limits<double>::infinity();
  std::vector<int> pos(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) pos[static_cast<size_t>(i)] = i;
  std::vector<double> nearest(static_cast<size_t>(L));
  while (true) {
    double total = 0.0;
    for (int l = 0; l < L && total <= out.d_min + 1e-9; ++l) {
      double best = std::numeric_limits<double>::infinity();
      for (int p : pos) best = std::min(best, d[static_cast<size_t>(l)][static_cast<size_t>(p)]);
      total += best;
    }
    if (total < out.d_min - 1e-9) {
      out.d_min = total;
      out.placements.clear();
    }
    if (std::abs(total - out.d_min) <= 1e-9) out.placements.push_back(pos);
    int k = m - 1;
    while (k >= 0 && pos[static_cast<size_t>(k)] == L - m + k) --k;
    if (k < 0) break;
    ++pos[static_cast<size_t>(k)];
    for (int j = k + 1; j < m; ++j) pos[static_cast<size_t>(j)] = pos[static_cast<size_t>(j - 1)] + 1;
  }
  return out;
}

namespace {

std::vector<std::uint8_t> random_bits(int n, Rng& rng) {
  std::vector<std::uint8_t> s(static_cast<size_t>(n));
  for (auto& b : s) b = static_cast<std::uint8_t>(rng() & 1);
  return s;
}

// Local field of every variable: linear plus couplings to set neighbours.
std::vector<double> local_fields(const CompiledQubo& q, const std::vector<std::uint8_t>& s) {
  std::vector<double> f(q.linear);
  for (int i = 0; i < q.n; ++i) {
    if (!s[static_cast<size_t>(i)]) continue;
    for (auto [j, c] : q.neighbors[static_cast<size_t>(i)]) f[static_cast<size_t>(j)] += c;
  }
  return f;
}

void flip(const CompiledQubo& q, std::vector<std::uint8_t>& s, std::vector<double>& field, int i) {
  auto& b = s[static_cast<size_t>(i)];
  b ^= 1;
  const double sign = b ? 1.0 : -1.0;
  for (auto [j, c] : q.neighbors[static_cast<size_t>(i)]) field[static_cast<size_t>(j)] += sign * c;
}

double delta(const std::vector<std::uint8_t>& s, const std::vector<double>& field, int i) {
  return s[static_cast<size_t>(i)] ? -field[static_cast<size_t>(i)] : field[static_cast<size_t>(i)];
}

}  // namespace

HeuristicResult simulated_annealing(const CompiledQubo& q, const SimAnnealConfig& cfg, std::uint64_t seed) {
  if (cfg.sweeps < 1) throw InputError("sweeps must be positive");
  if (!(cfg.beta_initial > 0.0) || !(cfg.beta_final > cfg.beta_initial)) {
    throw InputError("need 0 < beta_initial < beta_final");
  }
  auto rng = make_rng(seed);
  auto s = random_bits(q.n, rng);
  auto field = local_fields(q, s);
  double e = q.energy(s);
  HeuristicResult best{s, e};
  const double ratio = cfg.sweeps > 1 ? std::pow(cfg.beta_final / cfg.beta_initial, 1.0 / (cfg.sweeps - 1)) : 1.0;
  double beta = cfg.beta_initial;
  for (int sweep = 0; sweep < cfg.sweeps; ++sweep, beta *= ratio) {
    for (int i = 0; i < q.n; ++i) {
      const double de = delta(s, field, i);
      if (de <= 0.0 || uniform01(rng) < std::exp(-beta * de)) {
        flip(q, s, field, i);
        e += de;
        if (e < best.energy - 1e-12) best = {s, e};
      }
    }
  }
  best.energy = q.energy(best.state);
  return best;
}

HeuristicResult simulated_annealing(const QuboModel& model, const SimAnnealConfig& config, std::uint64_t seed) {
  return simulated_annealing(CompiledQubo(model), config, seed);
}

HeuristicResult tabu_search(const CompiledQubo& q, const TabuConfig& cfg, std::uint64_t seed) {
  if (cfg.max_iter < 0 || cfg.tenure < 0) throw InputError("tabu counts must be non-negative");
  const int tenure = cfg.tenure > 0 ? cfg.tenure : std::max(10, q.n / 4);
  auto rng = make_rng(seed);
  auto s = random_bits(q.n, rng);
  auto field = local_fields(q, s);
  double e = q.energy(s);
  HeuristicResult best{s, e};
  std::vector<long> tabu_until(static_cast<size_t>(q.n), -1);
  for (long it = 0; it < cfg.max_iter; ++it) {
    int move = -1;
    double move_de = std::numeric_limits<double>::infinity();
    int ties = 0;
    for (int i = 0; i < q.n; ++i) {
      const double de = delta(s, field, i);
      const bool aspire = e + de < best.energy - 1e-12;
      if (tabu_until[static_cast<size_t>(i)] > it && !aspire) continue;
      if (de < move_de - 1e-12) {
        move = i;
        move_de = de;
        ties = 1;
      } else if (std::abs(de - move_de) <= 1e-12 && rng() % static_cast<std::uint64_t>(++ties) == 0) {
        move = i;
      }
    }
    if (move < 0) break;
    flip(q, s, field, move);
    e += move_de;
    tabu_until[static_cast<size_t>(move)] = it + 1 + tenure;
    if (e < best.energy - 1e-12) best = {s, e};
  }
  best.energy = q.energy(best.state);
  return best;
}

HeuristicResult tabu_search(const QuboModel& model, const TabuConfig& config, std::uint64_t seed) {
  return tabu_search(CompiledQubo(model), config, seed);
}

std::optional<double> encoded_distance(const Encoding& enc, const std::vector<std::uint8_t>& s) {
  if (static_cast<int>(s.size()) != enc.n_qubits) throw InputError("state length differs from the encoding");
  const int L = enc.problem.geometry.nodes();
  auto d = [&](int a, int b) { return enc.distances[static_cast<size_t>(a)][static_cast<size_t>(b)]; };
  auto on = [&](int q) { return s[static_cast<size_t>(q)] != 0; };
  if (enc.variant != EncodingVariant::StartDest) {
    if (enc.n_qubits > 64) throw CapacityError("state too wide for this encoding");
    Index x = 0;
    for (int i = 0; i < enc.n_qubits; ++i) x |= static_cast<Index>(on(i)) << i;
    if (!is_feasible(enc, x)) return std::nullopt;
    return energy_qubo(core_model(enc), x);
  }
  const int m = enc.problem.ambulances;
  std::vector<int> start(static_cast<size_t>(m), -1);
  for (int a = 0; a < m; ++a) {
    for (int i = 0; i < L; ++i) {
      if (!on(enc.start_qubit(a, i))) continue;
      if (start[static_cast<size_t>(a)] >= 0) return std::nullopt;
      start[static_cast<size_t>(a)] = i;
    }
    if (start[static_cast<size_t>(a)] < 0) return std::nullopt;
  }
  if (enc.problem.forbid_colocation && m >= 2 && start[0] == start[1]) return std::nullopt;
  double total = 0.0;
  for (int l = 0; l < L; ++l) {
    int served = 0;
    for (int a = 0; a < m; ++a) {
      if (on(enc.dest_qubit(a, l))) {
        ++served;
        total += d(start[static_cast<size_t>(a)], l);
      }
    }
    if (served != 1) return std::nullopt;
  }
  return total;
}

RestartStats restart_harness(const Heuristic& solver, const EncodedProblem& problem, int restarts,
                             std::uint64_t seed, std::optional<double> d_min) {
  if (restarts < 1) throw InputError("at least one restart is required");
  const CompiledQubo q(problem.model);
  RestartStats st;
  st.restarts = restarts;
  st.best_energy = std::numeric_limits<double>::infinity();
  int hits = 0;
  for (int r = 0; r < restarts; ++r) {
    const auto res = solver(q, derive_seed(seed, static_cast<std::uint64_t>(r)));
    if (res.energy < st.best_energy - 1e-9) {
      st.best_energy = res.energy;
      hits = 0;
    }
    if (std::abs(res.energy - st.best_energy) <= 1e-9) ++hits;
    if (auto dist = encoded_distance(problem.encoding, res.state)) {
      ++st.feasible_runs;
      if (!st.best_distance || *dist < *st.best_distance) st.best_distance = dist;
    }
  }
  st.best_frequency = static_cast<double>(hits) / restarts;
  if (st.best_distance && d_min && *d_min > 0.0) st.ratio = *st.best_distance / *d_min;
  return st;
}

}  // namespace qlocate
