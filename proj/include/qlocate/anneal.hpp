#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qlocate/baselines.hpp"
#include "qlocate/encoders.hpp"
#include "qlocate/ising.hpp"
#include "qlocate/metrics.hpp"
#include "qlocate/statevector.hpp"

namespace qlocate {

inline constexpr int kAnnealQubitCap = 10;

/// H(s) = -(1 - s) sum_i X_i + s H_problem.
struct AnnealSchedule {
  enum class Kind { Forward, Reverse };
  Kind kind = Kind::Forward;
  double time = 1.0;   ///< forward: total time; reverse: time of each ramp
  double s_min = 0.5;  ///< reverse turning point
  double hold = 0.0;   ///< reverse dwell time at s_min
  int steps = 100;     ///< steps per ramp

  static AnnealSchedule forward(double time, int steps) { return {Kind::Forward, time, 0.5, 0.0, steps}; }
  static AnnealSchedule reverse(double s_min, double hold, double ramp_time, int steps) {
    return {Kind::Reverse, ramp_time, s_min, hold, steps};
  }
  double total_time() const { return kind == Kind::Forward ? time : 2 * time + hold; }
};

struct AnnealResult {
  StateVector state;
  double p_gnd = 0.0;
  std::vector<Index> ground;  ///< global minima of the problem Hamiltonian
};

/// Uniform start, piecewise-constant propagation with the Hamiltonian at each step midpoint.
AnnealResult simulate_forward_anneal(const IsingModel& model, const AnnealSchedule& schedule);
/// s goes 1 -> s_min, holds, then returns to 1, starting from the basis state `seed`.
AnnealResult simulate_reverse_anneal(const IsingModel& model, const std::string& seed,
                                     const AnnealSchedule& schedule);

inline constexpr double kTtsConfidence = 0.99;

/// Expected time to see the solution with 99% confidence.
double tts(double p_sol, double t_cycle);

/// prefactor * rms(J) * sqrt(mean couplings per qubit).
double chain_strength(double prefactor, const IsingModel& model);

/// Majority value of each chain; an exact tie draws a coin seeded by (seed, chain index).
std::vector<std::uint8_t> resolve_chain_majority(const std::vector<std::vector<int>>& chains,
                                                 const std::vector<std::uint8_t>& sample, std::uint64_t seed);

struct ToyDynamicsSampler {
  AnnealSchedule schedule;
};
using AnnealSampler = std::variant<SimAnnealConfig, ToyDynamicsSampler>;

struct SweepPoint {
  double lambda_ratio = 0.0;
  double lambda = 0.0;
  int reads = 0;
  RunMetrics metrics;
};

/// Re-encodes `problem` at every ratio and scores `reads` samples per point.
std::vector<SweepPoint> anneal_parameter_sweep(const FacilityProblem& problem, const std::vector<double>& ratios,
                                               const AnnealSampler& sampler, int reads, std::uint64_t seed);

/// The encoding matching the problem's ambulance count and geometry.
EncodedProblem encode_for_sweep(const FacilityProblem& problem);

}  // namespace qlocate
