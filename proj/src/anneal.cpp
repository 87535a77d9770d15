#include "qlocate/anneal.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "qlocate/error.hpp"
#include "qlocate/rng.hpp"

namespace qlocate {

namespace {

void check_size(const IsingModel& model) {
  if (model.n() > kAnnealQubitCap) {
    throw CapacityError("annealing dynamics limited to " + std::to_string(kAnnealQubitCap) + " spins");
  }
}

// psi <- exp(-i H(s) dt) psi
void propagate(Eigen::VectorXcd& psi, const std::vector<double>& diag, int n, double s, double dt) {
  if (dt == 0.0) return;
  const Eigen::Index dim = static_cast<Eigen::Index>(diag.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index x = 0; x < dim; ++x) {
    h(x, x) = s * diag[static_cast<size_t>(x)];
    for (int i = 0; i < n; ++i) h(x, x ^ (Eigen::Index{1} << i)) = -(1.0 - s);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  Eigen::VectorXcd c = es.eigenvectors().transpose().cast<Complex>() * psi;
  for (Eigen::Index k = 0; k < dim; ++k) c(k) *= std::polar(1.0, -es.eigenvalues()(k) * dt);
  psi = es.eigenvectors().cast<Complex>() * c;
}

void ramp(Eigen::VectorXcd& psi, const std::vector<double>& diag, int n, double s0, double s1, double time,
          int steps) {
  const double dt = time / steps;
  for (int k = 0; k < steps; ++k) propagate(psi, diag, n, s0 + (s1 - s0) * (k + 0.5) / steps, dt);
}

AnnealResult finish(const Eigen::VectorXcd& psi, const std::vector<double>& diag, int n) {
  AnnealResult r;
  r.state = StateVector(n);
  for (Eigen::Index x = 0; x < psi.size(); ++x) r.state[static_cast<Index>(x)] = psi(x);
  const double e0 = *std::min_element(diag.begin(), diag.end());
  for (Index x = 0; x < diag.size(); ++x) {
    if (diag[x] - e0 <= 1e-9) {
      r.ground.push_back(x);
      r.p_gnd += std::norm(psi(static_cast<Eigen::Index>(x)));
    }
  }
  return r;
}

void check_schedule(const AnnealSchedule& s) {
  if (s.steps < 1) throw InputError("anneal needs at least one step");
  if (s.time < 0.0 || s.hold < 0.0) throw InputError("anneal times must be non-negative");
}

}  // namespace

AnnealResult simulate_forward_anneal(const IsingModel& model, const AnnealSchedule& schedule) {
  check_size(model);
  check_schedule(schedule);
  const int n = model.n();
  const auto diag = energy_table(model);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Constant(static_cast<Eigen::Index>(diag.size()),
                                                    Complex(1.0 / std::sqrt(static_cast<double>(diag.size())), 0.0));
  ramp(psi, diag, n, 0.0, 1.0, schedule.time, schedule.steps);
  return finish(psi, diag, n);
}

AnnealResult simulate_reverse_anneal(const IsingModel& model, const std::string& seed,
                                     const AnnealSchedule& schedule) {
  check_size(model);
  check_schedule(schedule);
  if (!(schedule.s_min > 0.0 && schedule.s_min <= 1.0)) throw InputError("s_min must lie in (0, 1]");
  const int n = model.n();
  const auto diag = energy_table(model);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(diag.size()));
  psi(static_cast<Eigen::Index>(from_bitstring(seed, n))) = 1.0;
  ramp(psi, diag, n, 1.0, schedule.s_min, schedule.time, schedule.steps);
  propagate(psi, diag, n, schedule.s_min, schedule.hold);
  ramp(psi, diag, n, schedule.s_min, 1.0, schedule.time, schedule.steps);
  return finish(psi, diag, n);
}

double tts(double p_sol, double t_cycle) {
  if (!(p_sol > 0.0 && p_sol < 1.0)) throw InputError("success probability must lie in (0, 1)");
  return t_cycle * std::log(1.0 - kTtsConfidence) / std::log(1.0 - p_sol);
}

double chain_strength(double prefactor, const IsingModel& model) {
  if (model.J().empty()) throw InputError("chain strength needs at least one coupling");
  double sq = 0.0;
  for (const auto& [ij, c] : model.J()) sq += c * c;
  const double edges = static_cast<double>(model.J().size());
  return prefactor * std::sqrt(sq / edges) * std::sqrt(2.0 * edges / model.n());
}

std::vector<std::uint8_t> resolve_chain_majority(const std::vector<std::vector<int>>& chains,
                                                 const std::vector<std::uint8_t>& sample, std::uint64_t seed) {
  std::vector<bool> used(sample.size(), false);
  std::vector<std::uint8_t> out;
  for (size_t c = 0; c < chains.size(); ++c) {
    if (chains[c].empty()) throw InputError("empty chain");
    int ones = 0;
    for (int q : chains[c]) {
      if (q < 0 || static_cast<size_t>(q) >= sample.size()) throw InputError("chain qubit outside the sample");
      if (used[static_cast<size_t>(q)]) throw InputError("chains overlap");
      used[static_cast<size_t>(q)] = true;
      ones += sample[static_cast<size_t>(q)] != 0;
    }
    const int zeros = static_cast<int>(chains[c].size()) - ones;
    if (ones != zeros) {
      out.push_back(ones > zeros ? 1 : 0);
    } else {
      auto rng = make_rng(derive_seed(seed, c));
      out.push_back(static_cast<std::uint8_t>(rng() & 1));
    }
  }
  return out;
}

EncodedProblem encode_for_sweep(const FacilityProblem& problem) {
  if (problem.ambulances == 1) return encode_single_complement(problem);
  return encode_start_dest(problem);
}

std::vector<SweepPoint> anneal_parameter_sweep(const FacilityProblem& problem, const std::vector<double>& ratios,
                                               const AnnealSampler& sampler, int reads, std::uint64_t seed) {
  if (reads < 1) throw InputError("reads must be positive");
  std::vector<SweepPoint> out;
  for (size_t k = 0; k < ratios.size(); ++k) {
    FacilityProblem p = problem;
    p.lambda.reset();
    p.lambda_ratio = ratios[k];
    const auto enc = encode_for_sweep(p);
    const FeasibleOracle oracle(enc.encoding, enc.model);
    const std::uint64_t point_seed = derive_seed(seed, k);
    SampleSet samples;
    samples.n = enc.encoding.n_qubits;
    samples.shots = reads;
    if (const auto* sa = std::get_if<SimAnnealConfig>(&sampler)) {
      const CompiledQubo q(enc.model);
      for (int r = 0; r < reads; ++r) {
        const auto res = simulated_annealing(q, *sa, derive_seed(point_seed, static_cast<std::uint64_t>(r)));
        Index x = 0;
        for (int i = 0; i < q.n; ++i) x |= static_cast<Index>(res.state[static_cast<size_t>(i)]) << i;
        ++samples.counts[x];
      }
    } else {
      const auto& toy = std::get<ToyDynamicsSampler>(sampler);
      const auto res = simulate_forward_anneal(qubo_to_ising(enc.model), toy.schedule);
      samples = sample(res.state, reads, point_seed);
    }
    out.push_back({ratios[k], enc.encoding.lambda, reads, oracle.evaluate(samples)});
  }
  return out;
}

}  // namespace qlocate
