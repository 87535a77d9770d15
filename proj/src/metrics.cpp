#include "qlocate/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "qlocate/error.hpp"

namespace qlocate {

std::vector<Index> hamming_target_states(const Encoding& encoding) {
  const int n = encoding.n_qubits;
  Index covered = 0;
  bool disjoint = true;
  for (const auto& t : encoding.hamming_targets) {
    for (int q : t.qubits) {
      if (covered & (Index{1} << q)) disjoint = false;
      covered |= Index{1} << q;
    }
  }
  std::vector<Index> out;
  const Index all = n == 64 ? ~Index{0} : (Index{1} << n) - 1;
  if (!disjoint || covered != all) {
    if (n > kSpectrumQubitCap) throw CapacityError("cannot enumerate target states of this encoding");
    for (Index x = 0; x <= all; ++x) {
      if (satisfies_hamming_targets(encoding, x)) out.push_back(x);
    }
    return out;
  }
  out.push_back(0);
  for (const auto& t : encoding.hamming_targets) {
    std::vector<Index> block;
    for (const auto& combo : combinations(static_cast<int>(t.qubits.size()), t.weight)) {
      Index m = 0;
      for (int k : combo) m |= Index{1} << t.qubits[static_cast<size_t>(k)];
      block.push_back(m);
    }
    std::vector<Index> next;
    next.reserve(out.size() * block.size());
    for (Index x : out) {
      for (Index y : block) next.push_back(x | y);
    }
    out.swap(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

FeasibleOracle::FeasibleOracle(const Encoding& encoding, const QuboModel& model, double tolerance)
    : encoding_(encoding), model_(model), tolerance_(tolerance) {
  if (model.n() != encoding.n_qubits) throw InputError("model and encoding sizes differ");
  const QuboModel core = core_model(encoding);
  for (Index x : hamming_target_states(encoding)) {
    if (!is_feasible(encoding, x)) continue;
    states_.push_back(x);
    core_.push_back(energy_qubo(core, x));
  }
  if (states_.empty()) throw EncodingError("encoding has no feasible states");
  c_min_ = *std::min_element(core_.begin(), core_.end());
  c_max_ = *std::max_element(core_.begin(), core_.end());
  ground_.resize(core_.size());
  for (size_t i = 0; i < core_.size(); ++i) ground_[i] = core_[i] - c_min_ <= tolerance_;
}

int FeasibleOracle::ground_count() const {
  return static_cast<int>(std::count(ground_.begin(), ground_.end(), true));
}

std::vector<SpectrumEntry> FeasibleOracle::spectrum() const {
  std::vector<std::pair<double, Index>> sorted;
  for (size_t i = 0; i < states_.size(); ++i) sorted.emplace_back(core_[i], states_[i]);
  std::sort(sorted.begin(), sorted.end());
  std::vector<SpectrumEntry> out;
  for (const auto& [e, x] : sorted) {
    if (out.empty() || e - out.back().energy > tolerance_) out.push_back({e, {}});
    out.back().states.push_back(to_bitstring(x, encoding_.n_qubits));
  }
  return out;
}

RunMetrics FeasibleOracle::from_masses(double p_feas, double weighted_core, double p_gnd, double ev) const {
  RunMetrics m;
  m.ev = ev;
  m.p_feas = std::clamp(p_feas, 0.0, 1.0);
  m.p_gnd = std::clamp(p_gnd, 0.0, m.p_feas);
  if (p_feas <= 0.0) {
    m.no_feasible_mass = true;
    m.r_approx = 0.0;
  } else if (c_max_ - c_min_ <= tolerance_) {
    m.r_approx = 1.0;
  } else {
    // feasibility-projected EV rescaled so C_max -> 0 and C_min -> 1
    m.r_approx = std::clamp((weighted_core - p_feas * c_max_) / (p_feas * (c_min_ - c_max_)), 0.0, 1.0);
  }
  return m;
}

RunMetrics FeasibleOracle::evaluate(const std::vector<double>& probs, double ev) const {
  double p_feas = 0.0, weighted = 0.0, p_gnd = 0.0;
  for (size_t i = 0; i < states_.size(); ++i) {
    const double p = probs[states_[i]];
    p_feas += p;
    weighted += p * core_[i];
    if (ground_[i]) p_gnd += p;
  }
  return from_masses(p_feas, weighted, p_gnd, ev);
}

RunMetrics FeasibleOracle::evaluate(const StateVector& state, const std::vector<double>& diag) const {
  if (state.n() != encoding_.n_qubits) throw InputError("state and encoding sizes differ");
  return evaluate(state.probabilities(), expectation(state, diag));
}

RunMetrics FeasibleOracle::evaluate(const StateVector& state) const {
  return evaluate(state, energy_table(model_));
}

RunMetrics FeasibleOracle::evaluate(const SampleSet& samples) const {
  double p_feas = 0.0, weighted = 0.0, p_gnd = 0.0, ev = 0.0;
  const double shots = static_cast<double>(samples.shots);
  for (const auto& [x, c] : samples.counts) {
    const double p = static_cast<double>(c) / shots;
    ev += p * energy_qubo(model_, x);
    auto it = std::lower_bound(states_.begin(), states_.end(), x);
    if (it == states_.end() || *it != x) continue;
    const size_t i = static_cast<size_t>(it - states_.begin());
    p_feas += p;
    weighted += p * core_[i];
    if (ground_[i]) p_gnd += p;
  }
  return from_masses(p_feas, weighted, p_gnd, ev);
}

}  // namespace qlocate
