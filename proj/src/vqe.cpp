#include "qlocate/vqe.hpp"

#include <algorithm>
#include <cmath>

#include "qlocate/error.hpp"
#include "qlocate/rng.hpp"

namespace qlocate {

int VqeAnsatz::param_count() const {
  return (initial_layer ? n : 0) + 2 * (n - 1) * entangling_layers;
}

std::vector<Gate> VqeAnsatz::gates() const {
  if (n < 1) throw InputError("ansatz needs at least one qubit");
  if (entangling_layers < 0) throw InputError("negative layer count");
  std::vector<Gate> g;
  int k = 0;
  auto ry = [&](int q) { g.push_back({Gate::Kind::Ry, q, -1, k++}); };
  auto cnot = [&](int c) { g.push_back({Gate::Kind::Cnot, c, c + 1, -1}); };
  if (initial_layer) {
    for (int q = 0; q < n; ++q) ry(q);
  }
  for (int l = 0; l < entangling_layers; ++l) {
    for (int q = 0; q + 1 < n; q += 2) cnot(q);
    for (int q = 0; q < n - 1; ++q) ry(q);
    for (int q = 1; q + 1 < n; q += 2) cnot(q);
    for (int q = 1; q < n; ++q) ry(q);
  }
  return g;
}

StateVector apply_gates(int n, const std::vector<Gate>& gates, const std::vector<double>& theta) {
  StateVector s(n);
  for (const auto& gate : gates) {
    if (gate.kind == Gate::Kind::Ry) {
      apply_ry(s, gate.q0, theta[static_cast<size_t>(gate.param)]);
    } else {
      apply_cnot(s, gate.q0, gate.q1);
    }
  }
  return s;
}

namespace {

void check_theta(const VqeAnsatz& ansatz, const std::vector<double>& theta) {
  if (static_cast<int>(theta.size()) != ansatz.param_count()) {
    throw InputError("expected " + std::to_string(ansatz.param_count()) + " parameters, got " +
                     std::to_string(theta.size()));
  }
}

}  // namespace

StateVector apply_ansatz(const VqeAnsatz& ansatz, const std::vector<double>& theta) {
  check_theta(ansatz, theta);
  return apply_gates(ansatz.n, ansatz.gates(), theta);
}

double ev_statevector(const VqeAnsatz& ansatz, const std::vector<double>& theta, const QuboModel& model) {
  return expectation(apply_ansatz(ansatz, theta), model);
}

SampledEstimate ev_all_qubit_sampling(const VqeAnsatz& ansatz, const std::vector<double>& theta,
                                      const QuboModel& model, std::int64_t shots, std::uint64_t seed) {
  if (shots < 1) throw InputError("shots must be positive");
  const auto samples = sample(apply_ansatz(ansatz, theta), shots, seed);
  double sum = 0.0, sq = 0.0;
  for (const auto& [x, c] : samples.counts) {
    const double e = energy_qubo(model, x);
    sum += static_cast<double>(c) * e;
    sq += static_cast<double>(c) * e * e;
  }
  const double n = static_cast<double>(shots);
  const double mean = sum / n;
  const double var = std::max(0.0, sq / n - mean * mean);
  return {mean, std::sqrt(var / n), 1, shots};
}

CausalCone causal_cone(const VqeAnsatz& ansatz, const std::vector<int>& term) {
  std::vector<bool> in(static_cast<size_t>(ansatz.n), false);
  for (int q : term) {
    if (q < 0 || q >= ansatz.n) throw InputError("term qubit outside the ansatz");
    in[static_cast<size_t>(q)] = true;
  }
  const auto all = ansatz.gates();
  std::vector<Gate> kept;
  for (auto it = all.rbegin(); it != all.rend(); ++it) {
    if (it->kind == Gate::Kind::Ry) {
      if (in[static_cast<size_t>(it->q0)]) kept.push_back(*it);
    } else if (in[static_cast<size_t>(it->q0)] || in[static_cast<size_t>(it->q1)]) {
      in[static_cast<size_t>(it->q0)] = in[static_cast<size_t>(it->q1)] = true;
      kept.push_back(*it);
    }
  }
  CausalCone cone;
  std::vector<int> local(static_cast<size_t>(ansatz.n), -1);
  for (int q = 0; q < ansatz.n; ++q) {
    if (in[static_cast<size_t>(q)]) {
      local[static_cast<size_t>(q)] = static_cast<int>(cone.qubits.size());
      cone.qubits.push_back(q);
    }
  }
  for (int q : term) cone.term.push_back(local[static_cast<size_t>(q)]);
  for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
    Gate g = *it;
    g.q0 = local[static_cast<size_t>(g.q0)];
    if (g.kind == Gate::Kind::Cnot) g.q1 = local[static_cast<size_t>(g.q1)];
    cone.gates.push_back(g);
  }
  return cone;
}

std::vector<double> cone_distribution(const CausalCone& cone, const std::vector<double>& theta) {
  return marginal(apply_gates(static_cast<int>(cone.qubits.size()), cone.gates, theta), cone.term);
}

std::vector<double> marginal(const StateVector& state, const std::vector<int>& qubits) {
  std::vector<double> out(Index{1} << qubits.size(), 0.0);
  const auto& amp = state.amplitudes();
  for (Index x = 0; x < state.dim(); ++x) {
    Index y = 0;
    for (size_t k = 0; k < qubits.size(); ++k) y |= static_cast<Index>(bit(x, qubits[k])) << k;
    out[y] += std::norm(amp[x]);
  }
  return out;
}

SampledEstimate ev_causal_cone_sampling(const VqeAnsatz& ansatz, const std::vector<double>& theta,
                                        const IsingModel& model, std::int64_t shots_per_term,
                                        std::uint64_t seed) {
  check_theta(ansatz, theta);
  if (shots_per_term < 1) throw InputError("shots must be positive");
  if (model.n() != ansatz.n) throw InputError("model and ansatz sizes differ");
  std::vector<std::pair<std::vector<int>, double>> terms;
  for (auto [i, c] : model.h()) terms.push_back({{i}, c});
  for (auto [ij, c] : model.J()) terms.push_back({{ij.first, ij.second}, c});

  SampledEstimate est;
  est.value = model.offset();
  double var = 0.0;
  for (size_t t = 0; t < terms.size(); ++t) {
    const auto& [qs, coeff] = terms[t];
    const auto cone = causal_cone(ansatz, qs);
    const auto samples = sample_distribution(static_cast<int>(qs.size()), cone_distribution(cone, theta),
                                             shots_per_term, derive_seed(seed, t));
    double zsum = 0.0;
    for (const auto& [x, c] : samples.counts) {
      const int parity = popcount(x) & 1;
      zsum += static_cast<double>(c) * (parity ? -1.0 : 1.0);
    }
    const double n = static_cast<double>(shots_per_term);
    const double m = zsum / n;
    est.value += coeff * m;
    var += coeff * coeff * std::max(0.0, 1.0 - m * m) / n;
    ++est.circuits;
    est.total_shots += shots_per_term;
  }
  est.std_error = std::sqrt(var);
  return est;
}

}  // namespace qlocate
