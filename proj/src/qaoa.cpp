#include "qlocate/qaoa.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qlocate/error.hpp"
#include "qlocate/rng.hpp"

namespace qlocate {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Block index of every qubit under the encoding's Hamming targets; -1 if none.
std::vector<int> qubit_blocks(const Encoding& encoding) {
  std::vector<int> block(static_cast<size_t>(encoding.n_qubits), -1);
  for (size_t b = 0; b < encoding.hamming_targets.size(); ++b) {
    for (int q : encoding.hamming_targets[b].qubits) block[static_cast<size_t>(q)] = static_cast<int>(b);
  }
  return block;
}

int ring_beta_index(const MixerSpec& mixer, size_t ring) {
  if (mixer.kind != MixerKind::ThreeXY || mixer.beta_count == 1) return 0;
  if (mixer.beta_count == 2) return ring < 2 ? 0 : 1;
  return static_cast<int>(ring);
}

}  // namespace

MixerSpec MixerSpec::x() { return {MixerKind::X, {}, 1, 1}; }

MixerSpec MixerSpec::xy(std::vector<std::vector<int>> rings) {
  if (rings.empty()) throw InputError("an XY mixer needs at least one ring");
  Index seen = 0;
  for (const auto& r : rings) {
    for (int q : r) {
      if (seen & (Index{1} << q)) throw InputError("XY rings overlap on qubit " + std::to_string(q));
      seen |= Index{1} << q;
    }
  }
  return {MixerKind::XY, std::move(rings), 1, 1};
}

MixerSpec MixerSpec::three_xy(const Encoding& encoding, int betas, int gammas) {
  const bool valid = (gammas == 1 && betas >= 1 && betas <= 3) || (betas == 3 && gammas == 3);
  if (!valid) throw InputError("angle scheme must be one of {1,1}, {2,1}, {3,1}, {3,3}");
  if (encoding.variant != EncodingVariant::StartDest || encoding.hamming_targets.size() != 3) {
    throw InputError("the three-ring mixer needs a two-ambulance start-dest encoding");
  }
  MixerSpec m;
  m.kind = MixerKind::ThreeXY;
  for (const auto& t : encoding.hamming_targets) m.rings.push_back(t.qubits);
  m.beta_count = betas;
  m.gamma_count = gammas;
  return m;
}

std::string MixerSpec::name() const {
  switch (kind) {
    case MixerKind::X:
      return "X";
    case MixerKind::XY:
      return "XY";
    case MixerKind::ThreeXY:
      return "3XY{" + std::to_string(beta_count) + "," + std::to_string(gamma_count) + "}";
  }
  return "?";
}

std::string InitSpec::name() const {
  switch (kind) {
    case InitKind::Uniform:
      return "uniform";
    case InitKind::Dicke:
      return "dicke(" + std::to_string(k) + ")";
    case InitKind::DickeBlocks:
      return "dicke-blocks";
    case InitKind::PureFeasible:
      return "pure(" + bitstring + ")";
    case InitKind::RandomFeasible:
      return "random-feasible";
  }
  return "?";
}

std::vector<double> Angles::flatten() const {
  std::vector<double> out;
  for (int r = 0; r < p(); ++r) {
    out.insert(out.end(), beta[static_cast<size_t>(r)].begin(), beta[static_cast<size_t>(r)].end());
    out.insert(out.end(), gamma[static_cast<size_t>(r)].begin(), gamma[static_cast<size_t>(r)].end());
  }
  return out;
}

Angles Angles::unflatten(const std::vector<double>& flat, int p, int betas, int gammas) {
  if (static_cast<int>(flat.size()) != p * (betas + gammas)) {
    throw InputError("angle vector of length " + std::to_string(flat.size()) + " does not fit p=" +
                     std::to_string(p));
  }
  Angles a;
  size_t k = 0;
  for (int r = 0; r < p; ++r) {
    a.beta.emplace_back(flat.begin() + static_cast<long>(k), flat.begin() + static_cast<long>(k + betas));
    k += static_cast<size_t>(betas);
    a.gamma.emplace_back(flat.begin() + static_cast<long>(k), flat.begin() + static_cast<long>(k + gammas));
    k += static_cast<size_t>(gammas);
  }
  return a;
}

Angles Angles::zeros(int p, int betas, int gammas) {
  return unflatten(std::vector<double>(static_cast<size_t>(p * (betas + gammas)), 0.0), p, betas, gammas);
}

StateVector make_initial_state(const Encoding& encoding, const InitSpec& init) {
  const int n = encoding.n_qubits;
  switch (init.kind) {
    case InitKind::Uniform:
      return uniform_state(n);
    case InitKind::Dicke:
      return dicke_state(n, init.k);
    case InitKind::DickeBlocks: {
      std::vector<Block> blocks;
      for (const auto& t : encoding.hamming_targets) blocks.push_back({t.qubits, t.weight, std::nullopt});
      return block_product_state(n, blocks);
    }
    case InitKind::PureFeasible: {
      const Index x = from_bitstring(init.bitstring, n);
      if (!is_feasible(encoding, x)) throw InputError("initial string " + init.bitstring + " is not feasible");
      return basis_state(n, x);
    }
    case InitKind::RandomFeasible: {
      auto rng = make_rng(init.seed);
      const Index mask = (Index{1} << n) - 1;
      for (long tries = 0; tries < 100000000L; ++tries) {
        const Index x = rng() & mask;
        if (is_feasible(encoding, x)) return basis_state(n, x);
      }
      throw EncodingError("rejection sampling found no feasible state");
    }
  }
  throw InputError("unknown initial state kind");
}

QaoaEngine::QaoaEngine(const EncodedProblem& problem, MixerSpec mixer, InitSpec init)
    : problem_(problem),
      mixer_(std::move(mixer)),
      init_spec_(std::move(init)),
      oracle_(problem.encoding, problem.model),
      diag_(energy_table(problem.model)),
      init_(make_initial_state(problem.encoding, init_spec_)) {
  for (const auto& ring : mixer_.rings) {
    for (int q : ring) {
      if (q < 0 || q >= problem.encoding.n_qubits) throw InputError("ring qubit outside the encoding");
    }
  }
  if (mixer_.gamma_count > 1) {
    const auto block = qubit_blocks(problem.encoding);
    const Index dim = Index{1} << problem.model.n();
    group_diag_.assign(static_cast<size_t>(mixer_.gamma_count), std::vector<double>(dim, 0.0));
    for (double& v : group_diag_.back()) v = problem.model.offset();
    auto group_of = [&](int q) { return static_cast<size_t>(std::max(0, block[static_cast<size_t>(q)])); };
    for (auto [i, c] : problem.model.linear()) {
      auto& d = group_diag_[group_of(i)];
      for (Index x = 0; x < dim; ++x) {
        if (bit(x, i)) d[x] += c;
      }
    }
    for (auto [ij, c] : problem.model.quadratic()) {
      // cross-block terms take the gamma of the earlier block, which holds the start qubit
      auto& d = group_diag_[std::min(group_of(ij.first), group_of(ij.second))];
      const Index mask = (Index{1} << ij.first) | (Index{1} << ij.second);
      for (Index x = 0; x < dim; ++x) {
        if ((x & mask) == mask) d[x] += c;
      }
    }
  }
}

void QaoaEngine::check(const Angles& angles) const {
  for (int r = 0; r < angles.p(); ++r) {
    if (static_cast<int>(angles.beta[static_cast<size_t>(r)].size()) != mixer_.beta_count ||
        static_cast<int>(angles.gamma[static_cast<size_t>(r)].size()) != mixer_.gamma_count) {
      throw InputError("angle dimensions do not match the mixer's angle scheme");
    }
  }
  if (angles.gamma.size() != angles.beta.size()) throw InputError("beta and gamma step counts differ");
}

StateVector QaoaEngine::run(const Angles& angles) const {
  check(angles);
  StateVector s = init_;
  auto& amp = s.amplitudes();
  for (int r = 0; r < angles.p(); ++r) {
    const auto& g = angles.gamma[static_cast<size_t>(r)];
    const auto& b = angles.beta[static_cast<size_t>(r)];
    if (mixer_.gamma_count == 1) {
      apply_diagonal_phase(s, diag_, g[0]);
    } else {
      for (Index x = 0; x < s.dim(); ++x) {
        if (amp[x] == Complex(0.0, 0.0)) continue;
        double phi = 0.0;
        for (size_t k = 0; k < g.size(); ++k) phi += g[k] * group_diag_[k][x];
        amp[x] *= std::polar(1.0, -phi);
      }
    }
    if (mixer_.kind == MixerKind::X) {
      apply_x_mixer(s, b[0]);
    } else {
      for (size_t k = 0; k < mixer_.rings.size(); ++k) {
        apply_xy_ring_mixer(s, mixer_.rings[k], b[static_cast<size_t>(ring_beta_index(mixer_, k))]);
      }
    }
  }
  return s;
}

double QaoaEngine::expectation(const Angles& angles) const { return qlocate::expectation(run(angles), diag_); }

RunMetrics QaoaEngine::metrics(const StateVector& state) const { return oracle_.evaluate(state, diag_); }

RunMetrics QaoaEngine::metrics(const Angles& angles) const { return metrics(run(angles)); }

StateVector run_ansatz(const EncodedProblem& problem, const MixerSpec& mixer, const InitSpec& init,
                       const Angles& angles) {
  return QaoaEngine(problem, mixer, init).run(angles);
}

RunMetrics metrics(const StateVector& state, const FeasibleOracle& oracle) { return oracle.evaluate(state); }

MetricSummary summarize_runs(const std::vector<RunMetrics>& runs) {
  std::vector<double> ev, r, pf, pg;
  for (const auto& m : runs) {
    ev.push_back(m.ev);
    r.push_back(m.r_approx);
    pf.push_back(m.p_feas);
    pg.push_back(m.p_gnd);
  }
  MetricSummary s;
  s.ev = summarize_values(ev);
  s.r_approx = summarize_values(r);
  s.p_feas = summarize_values(pf);
  s.p_gnd = summarize_values(pg);
  s.best_run = s.ev.argmin;
  return s;
}

RestartResult random_restart_search(const QaoaEngine& engine, int p, int n_starts,
                                    const OptimizerConfig& optimizer, std::uint64_t seed) {
  if (n_starts < 1) throw InputError("at least one restart is required");
  if (p < 1) throw InputError("p must be positive");
  const int nb = engine.mixer().beta_count;
  const int ng = engine.mixer().gamma_count;
  Objective obj = [&](const std::vector<double>& x) {
    return engine.expectation(Angles::unflatten(x, p, nb, ng));
  };
  RestartResult out;
  std::vector<RunMetrics> all;
  for (int i = 0; i < n_starts; ++i) {
    RestartRun run;
    run.run_id = i;
    run.seed = derive_seed(seed, static_cast<std::uint64_t>(i));
    auto rng = make_rng(run.seed);
    std::vector<double> x0(static_cast<size_t>(engine.dimension(p)));
    for (double& v : x0) v = kTwoPi * uniform01(rng);
    run.start = Angles::unflatten(x0, p, nb, ng);
    const auto res = minimize(obj, x0, optimizer, derive_seed(run.seed, 1));
    run.best = Angles::unflatten(res.x_best, p, nb, ng);
    run.metrics = engine.metrics(run.best);
    run.metrics.evals = res.evals;
    all.push_back(run.metrics);
    out.runs.push_back(std::move(run));
  }
  out.summary = summarize_runs(all);
  return out;
}

Angles interp_extend(const Angles& angles) {
  const int p = angles.p();
  if (p < 1) throw InputError("cannot interpolate from zero steps");
  auto extend = [p](const std::vector<std::vector<double>>& fam) {
    const size_t width = fam[0].size();
    std::vector<std::vector<double>> out(static_cast<size_t>(p + 1), std::vector<double>(width));
    for (size_t j = 0; j < width; ++j) {
      auto old = [&](int i) { return (i < 1 || i > p) ? 0.0 : fam[static_cast<size_t>(i - 1)][j]; };
      for (int i = 1; i <= p + 1; ++i) {
        out[static_cast<size_t>(i - 1)][j] =
            (static_cast<double>(i - 1) / p) * old(i - 1) + (static_cast<double>(p - i + 1) / p) * old(i);
      }
    }
    return out;
  };
  return {extend(angles.beta), extend(angles.gamma)};
}

Angles extrap_extend(const Angles& angles, int by) {
  if (by < 0) throw InputError("cannot extend by a negative number of steps");
  if (angles.p() < 1) throw InputError("cannot extend zero steps");
  Angles out = angles;
  for (int k = 0; k < by; ++k) {
    out.beta.emplace_back(angles.beta[0].size(), 0.0);
    out.gamma.emplace_back(angles.gamma[0].size(), 0.0);
  }
  return out;
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::Interp:
      return "INTERP";
    case Strategy::Extrap1:
      return "EXTRAP1";
    case Strategy::Extrap2:
      return "EXTRAP2";
  }
  return "?";
}

Strategy strategy_from_string(const std::string& s) {
  if (s == "INTERP" || s == "interp") return Strategy::Interp;
  if (s == "EXTRAP1" || s == "extrap1") return Strategy::Extrap1;
  if (s == "EXTRAP2" || s == "extrap2") return Strategy::Extrap2;
  throw InputError("unknown strategy: " + s);
}

std::vector<ScheduleStep> increasing_p_schedule(const QaoaEngine& engine, Strategy strategy,
                                                const Angles& seed_angles, int p_max,
                                                const OptimizerConfig& optimizer, std::uint64_t seed) {
  if (seed_angles.p() < 1) throw InputError("seed angles must have at least one step");
  const int nb = engine.mixer().beta_count;
  const int ng = engine.mixer().gamma_count;
  std::vector<ScheduleStep> out;
  ScheduleStep first;
  first.p = seed_angles.p();
  first.angles = seed_angles;
  first.metrics = engine.metrics(seed_angles);
  out.push_back(first);

  Angles cur = seed_angles;
  double cur_ev = first.metrics.ev;
  while (cur.p() < p_max) {
    const int by = strategy == Strategy::Extrap2 ? std::min(2, p_max - cur.p()) : 1;
    const Angles start = strategy == Strategy::Interp ? interp_extend(cur) : extrap_extend(cur, by);
    const int p = start.p();
    Objective obj = [&](const std::vector<double>& x) {
      return engine.expectation(Angles::unflatten(x, p, nb, ng));
    };
    const auto res = minimize(obj, start.flatten(), optimizer, derive_seed(seed, static_cast<std::uint64_t>(p)));
    ScheduleStep step;
    step.p = p;
    step.angles = Angles::unflatten(res.x_best, p, nb, ng);
    step.metrics = engine.metrics(step.angles);
    if (step.metrics.ev > cur_ev) {
      step.angles = extrap_extend(cur, p - cur.p());
      step.metrics = engine.metrics(step.angles);
      step.fell_back = true;
    }
    step.metrics.evals = res.evals;
    cur = step.angles;
    cur_ev = step.metrics.ev;
    out.push_back(step);
  }
  return out;
}

GainFactors gain_decomposition(const RunMetrics& uniform, const RunMetrics& init, const RunMetrics& seed,
                               const RunMetrics& final) {
  GainFactors g;
  auto ratio = [&g](double num, double den) {
    if (den <= 0.0) {
      g.degenerate = true;
      return num <= 0.0 ? 1.0 : 0.0;
    }
    return num / den;
  };
  g.mixer = ratio(init.p_gnd, uniform.p_gnd);
  g.seed = ratio(seed.p_gnd, init.p_gnd);
  g.feasible = ratio(final.p_feas, seed.p_feas);
  g.approx = ratio(final.r_approx, seed.r_approx);
  const double schedule = ratio(final.p_gnd, seed.p_gnd);
  const double fa = g.feasible * g.approx;
  g.mix = fa > 0.0 ? schedule / fa : (g.degenerate = true, 1.0);
  g.overall = g.degenerate ? g.product() : ratio(final.p_gnd, uniform.p_gnd);
  return g;
}

}  // namespace qlocate
