#pragma once

#include <vector>

#include "qlocate/encoders.hpp"
#include "qlocate/ising.hpp"
#include "qlocate/statevector.hpp"

namespace qlocate {

struct RunMetrics {
  double ev = 0.0;
  double r_approx = 0.0;
  double p_feas = 0.0;
  double p_gnd = 0.0;
  int evals = 0;
  bool no_feasible_mass = false;
};

/// Feasible states of an encoding with their penalty-free energies.
class FeasibleOracle {
 public:
  FeasibleOracle(const Encoding& encoding, const QuboModel& model, double tolerance = 1e-9);

  const Encoding& encoding() const { return encoding_; }
  const QuboModel& model() const { return model_; }
  const std::vector<Index>& states() const { return states_; }
  const std::vector<double>& core_energies() const { return core_; }
  const std::vector<bool>& is_ground() const { return ground_; }
  double c_min() const { return c_min_; }
  double c_max() const { return c_max_; }
  int ground_count() const;

  /// Sorted spectrum of the feasible set under the penalty-free model.
  std::vector<SpectrumEntry> spectrum() const;

  /// Metrics of a distribution over basis states. `ev` is supplied by the caller.
  RunMetrics evaluate(const std::vector<double>& probs, double ev) const;
  /// EV taken from the diagonal of the full model.
  RunMetrics evaluate(const StateVector& state, const std::vector<double>& diag) const;
  RunMetrics evaluate(const StateVector& state) const;
  /// Empirical metrics of a sample multiset; EV is the sample mean of the full model.
  RunMetrics evaluate(const SampleSet& samples) const;

 private:
  RunMetrics from_masses(double p_feas, double weighted_core, double p_gnd, double ev) const;

  Encoding encoding_;
  QuboModel model_;
  std::vector<Index> states_;
  std::vector<double> core_;
  std::vector<bool> ground_;
  double c_min_ = 0.0;
  double c_max_ = 0.0;
  double tolerance_ = 1e-9;
};

/// Every state meeting the encoding's Hamming targets.
std::vector<Index> hamming_target_states(const Encoding& encoding);

}  // namespace qlocate
