#pragma once

#include <cstdint>
#include <vector>

#include "qlocate/ising.hpp"
#include "qlocate/statevector.hpp"

namespace qlocate {

struct Gate {
  enum class Kind { Ry, Cnot };
  Kind kind = Kind::Ry;
  int q0 = 0;      ///< rotated qubit, or CNOT control
  int q1 = -1;     ///< CNOT target
  int param = -1;  ///< index into theta for Ry
};

/// Hardware-efficient ansatz: optional R_y layer, then entangling layers of
/// CNOT(0,1),(2,3).. / R_y on 0..n-2 / CNOT(1,2),(3,4).. / R_y on 1..n-1.
struct VqeAnsatz {
  int n = 0;
  bool initial_layer = true;
  int entangling_layers = 1;

  int param_count() const;
  std::vector<Gate> gates() const;
};

/// Gates applied in order to |0...0> on `n` qubits.
StateVector apply_gates(int n, const std::vector<Gate>& gates, const std::vector<double>& theta);
StateVector apply_ansatz(const VqeAnsatz& ansatz, const std::vector<double>& theta);

double ev_statevector(const VqeAnsatz& ansatz, const std::vector<double>& theta, const QuboModel& model);

struct SampledEstimate {
  double value = 0.0;
  double std_error = 0.0;
  int circuits = 0;
  std::int64_t total_shots = 0;
};

/// Mean model energy over measured bitstrings of the whole register.
SampledEstimate ev_all_qubit_sampling(const VqeAnsatz& ansatz, const std::vector<double>& theta,
                                      const QuboModel& model, std::int64_t shots, std::uint64_t seed);

struct CausalCone {
  std::vector<int> qubits;  ///< ascending; local qubit k is global qubits[k]
  std::vector<Gate> gates;  ///< relabeled to local qubits
  std::vector<int> term;    ///< local positions of the observable's qubits
};

/// Backward light cone of the Z observable on `term` (one or two qubits).
CausalCone causal_cone(const VqeAnsatz& ansatz, const std::vector<int>& term);

/// Distribution of the term qubits from the reduced circuit, local index k = term[k].
std::vector<double> cone_distribution(const CausalCone& cone, const std::vector<double>& theta);
/// Marginal of a full state over `qubits`, local index k = qubits[k].
std::vector<double> marginal(const StateVector& state, const std::vector<int>& qubits);

/// One cone circuit per Ising field or coupling, each sampled independently.
SampledEstimate ev_causal_cone_sampling(const VqeAnsatz& ansatz, const std::vector<double>& theta,
                                        const IsingModel& model, std::int64_t shots_per_term,
                                        std::uint64_t seed);

}  // namespace qlocate
