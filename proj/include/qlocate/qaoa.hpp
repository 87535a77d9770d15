#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qlocate/encoders.hpp"
#include "qlocate/metrics.hpp"
#include "qlocate/optimizers.hpp"
#include "qlocate/stats.hpp"
#include "qlocate/statevector.hpp"

namespace qlocate {

enum class MixerKind { X, XY, ThreeXY };

struct MixerSpec {
  MixerKind kind = MixerKind::X;
  std::vector<std::vector<int>> rings;
  int beta_count = 1;
  int gamma_count = 1;

  static MixerSpec x();
  static MixerSpec xy(std::vector<std::vector<int>> rings);
  /// Rings A, B, C from the start-dest layout; (betas, gammas) in {(1,1), (2,1), (3,1), (3,3)}.
  static MixerSpec three_xy(const Encoding& encoding, int betas, int gammas);

  std::string name() const;
};

enum class InitKind { Uniform, Dicke, DickeBlocks, PureFeasible, RandomFeasible };

struct InitSpec {
  InitKind kind = InitKind::Uniform;
  int k = 0;                  ///< Dicke weight
  std::string bitstring;      ///< PureFeasible
  std::uint64_t seed = 0;     ///< RandomFeasible

  static InitSpec uniform() { return {InitKind::Uniform, 0, {}, 0}; }
  static InitSpec dicke(int k) { return {InitKind::Dicke, k, {}, 0}; }
  static InitSpec dicke_blocks() { return {InitKind::DickeBlocks, 0, {}, 0}; }
  static InitSpec pure(std::string s) { return {InitKind::PureFeasible, 0, std::move(s), 0}; }
  static InitSpec random_feasible(std::uint64_t seed) { return {InitKind::RandomFeasible, 0, {}, seed}; }

  std::string name() const;
};

/// beta[r] and gamma[r] hold the angles of step r.
struct Angles {
  std::vector<std::vector<double>> beta;
  std::vector<std::vector<double>> gamma;

  int p() const { return static_cast<int>(beta.size()); }
  /// Step-major: the betas then the gammas of step 0, then step 1, ...
  std::vector<double> flatten() const;
  static Angles unflatten(const std::vector<double>& flat, int p, int betas, int gammas);
  static Angles zeros(int p, int betas, int gammas);
};

/// Precomputed QAOA instance: diagonals, initial state and feasibility oracle.
class QaoaEngine {
 public:
  QaoaEngine(const EncodedProblem& problem, MixerSpec mixer, InitSpec init);

  const MixerSpec& mixer() const { return mixer_; }
  const InitSpec& init() const { return init_spec_; }
  const FeasibleOracle& oracle() const { return oracle_; }
  const std::vector<double>& diagonal() const { return diag_; }
  const StateVector& initial_state() const { return init_; }
  int n() const { return init_.n(); }
  int dimension(int p) const { return p * (mixer_.beta_count + mixer_.gamma_count); }

  StateVector run(const Angles& angles) const;
  double expectation(const Angles& angles) const;
  RunMetrics metrics(const StateVector& state) const;
  RunMetrics metrics(const Angles& angles) const;

 private:
  void check(const Angles& angles) const;

  EncodedProblem problem_;
  MixerSpec mixer_;
  InitSpec init_spec_;
  FeasibleOracle oracle_;
  std::vector<double> diag_;
  std::vector<std::vector<double>> group_diag_;  // one per gamma when gamma_count > 1
  StateVector init_;
};

StateVector make_initial_state(const Encoding& encoding, const InitSpec& init);

StateVector run_ansatz(const EncodedProblem& problem, const MixerSpec& mixer, const InitSpec& init,
                       const Angles& angles);

RunMetrics metrics(const StateVector& state, const FeasibleOracle& oracle);

struct RestartRun {
  int run_id = 0;
  std::uint64_t seed = 0;
  Angles start;
  Angles best;
  RunMetrics metrics;
};

struct MetricSummary {
  Summary ev;
  Summary r_approx;
  Summary p_feas;
  Summary p_gnd;
  int best_run = -1;  ///< lowest EV
};

MetricSummary summarize_runs(const std::vector<RunMetrics>& runs);

struct RestartResult {
  std::vector<RestartRun> runs;
  MetricSummary summary;
};

/// Starts drawn uniformly from [0, 2pi)^dim; restart i uses derive_seed(seed, i).
RestartResult random_restart_search(const QaoaEngine& engine, int p, int n_starts,
                                    const OptimizerConfig& optimizer, std::uint64_t seed);

/// Linear interpolation to p+1 steps, per angle family.
Angles interp_extend(const Angles& angles);
/// Appends `by` zero steps.
Angles extrap_extend(const Angles& angles, int by);

enum class Strategy { Interp, Extrap1, Extrap2 };
std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& s);

struct ScheduleStep {
  int p = 0;
  Angles angles;
  RunMetrics metrics;
  bool fell_back = false;  ///< optimizer result was worse than the extended previous point
};

/// Extends and reoptimizes from the seed angles up to p_max. The first entry is the seed.
std::vector<ScheduleStep> increasing_p_schedule(const QaoaEngine& engine, Strategy strategy,
                                                const Angles& seed_angles, int p_max,
                                                const OptimizerConfig& optimizer, std::uint64_t seed);

struct GainFactors {
  double mixer = 1.0;
  double seed = 1.0;
  double feasible = 1.0;
  double approx = 1.0;
  double mix = 1.0;
  double overall = 1.0;
  bool degenerate = false;  ///< a zero denominator was met

  double product() const { return mixer * seed * feasible * approx * mix; }
};

/// uniform: reference run of the X mixer from the equal superposition; init: the same
/// run with the chosen mixer and initial state; seed: best p=1 seed; final: end of the
/// increasing-p schedule.
GainFactors gain_decomposition(const RunMetrics& uniform, const RunMetrics& init, const RunMetrics& seed,
                               const RunMetrics& final);

}  // namespace qlocate
