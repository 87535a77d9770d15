#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qlocate/encoders.hpp"
#include "qlocate/ising.hpp"

namespace qlocate {

inline constexpr int kFacilityNodeCap = 1000;

struct FacilityOptimum {
  double d_min = 0.0;
  std::vector<std::vector<int>> placements;  ///< every optimal position set, ascending
};

/// Brute force over all position sets; each node goes to its nearest chosen position.
FacilityOptimum exact_facility_optimum(const FacilityProblem& problem);
/// Summed distance from every node to its nearest position; ties go to the lower index.
double facility_cost(const FacilityProblem& problem, const std::vector<int>& positions);

struct SimAnnealConfig {
  int sweeps = 1000;
  double beta_initial = 0.1;
  double beta_final = 10.0;
};

struct TabuConfig {
  int tenure = 0;  ///< 0 means max(10, n/4)
  int max_iter = 1000;
};

struct HeuristicResult {
  std::vector<std::uint8_t> state;
  double energy = 0.0;
};

/// Metropolis single-flip sweeps, geometric inverse temperature. Returns the best state seen.
HeuristicResult simulated_annealing(const CompiledQubo& model, const SimAnnealConfig& config, std::uint64_t seed);
HeuristicResult simulated_annealing(const QuboModel& model, const SimAnnealConfig& config, std::uint64_t seed);

/// Steepest single-flip descent with a tabu list and aspiration. Returns the best state seen.
HeuristicResult tabu_search(const CompiledQubo& model, const TabuConfig& config, std::uint64_t seed);
HeuristicResult tabu_search(const QuboModel& model, const TabuConfig& config, std::uint64_t seed);

/// Total distance of a feasible encoded state, or nothing when infeasible.
std::optional<double> encoded_distance(const Encoding& encoding, const std::vector<std::uint8_t>& state);

using Heuristic = std::function<HeuristicResult(const CompiledQubo&, std::uint64_t)>;

struct RestartStats {
  int restarts = 0;
  double best_energy = 0.0;
  double best_frequency = 0.0;  ///< share of restarts ending at best_energy
  int feasible_runs = 0;
  std::optional<double> best_distance;  ///< best feasible total distance
  std::optional<double> ratio;          ///< best_distance / d_min
};

/// Restart r runs with derive_seed(seed, r).
RestartStats restart_harness(const Heuristic& solver, const EncodedProblem& problem, int restarts,
                             std::uint64_t seed, std::optional<double> d_min);

}  // namespace qlocate
