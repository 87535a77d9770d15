#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qlocate/rng.hpp"

namespace qlocate {

using Objective = std::function<double(const std::vector<double>&)>;

struct NelderMeadConfig {
  int max_iter = 1000;
  double f_tol = 1e-8;
  double x_tol = 1e-8;
  double init_simplex_scale = 0.1;
};

struct SpsaConfig {
  double a = 0.1;
  double c = 0.1;
  int n_iter = 100;
  double alpha = 0.602;
  double gamma = 0.101;
};

/// BFGS on central finite-difference gradients.
struct FdQuasiNewtonConfig {
  double eps = 1e-6;
  int max_iter = 200;
  double g_tol = 1e-8;
};

using OptimizerConfig = std::variant<NelderMeadConfig, SpsaConfig, FdQuasiNewtonConfig>;

struct OptResult {
  std::vector<double> x_best;
  double f_best = 0.0;
  int evals = 0;
  int iterations = 0;
  std::vector<std::pair<int, double>> trace;  ///< (iteration, best value so far)
};

/// Minimizes `objective` from x0 and returns the best point ever evaluated.
/// Throws OptimizationError on a non-finite objective value.
OptResult minimize(const Objective& objective, const std::vector<double>& x0, const OptimizerConfig& config,
                   std::uint64_t seed);

/// (step_size_k, eps_k).
std::pair<double, double> spsa_schedules(const SpsaConfig& config, int k);

/// One SPSA update from theta; exactly two objective evaluations.
/// `gradient`, if given, receives the estimate.
std::vector<double> spsa_step(const Objective& objective, const std::vector<double>& theta, int k,
                              const SpsaConfig& config, Rng& rng, std::vector<double>* gradient = nullptr);

std::string optimizer_name(const OptimizerConfig& config);

}  // namespace qlocate
