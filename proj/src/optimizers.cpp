#include "qlocate/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "qlocate/error.hpp"

namespace qlocate {

namespace {

using Vec = std::vector<double>;

// Counts evaluations and remembers the best point seen.
class Tracker {
 public:
  explicit Tracker(const Objective& f) : f_(f) {}

  double operator()(const Vec& x) {
    const double v = f_(x);
    ++evals_;
    if (!std::isfinite(v)) {
      throw OptimizationError("objective returned a non-finite value at evaluation " + std::to_string(evals_));
    }
    if (best_x_.empty() || v < best_f_) {
      best_f_ = v;
      best_x_ = x;
    }
    return v;
  }

  void mark(int iteration) { trace_.emplace_back(iteration, best_f_); }

  OptResult result(int iterations) const {
    OptResult r;
    r.x_best = best_x_;
    r.f_best = best_f_;
    r.evals = evals_;
    r.iterations = iterations;
    r.trace = trace_;
    return r;
  }

 private:
  const Objective& f_;
  int evals_ = 0;
  double best_f_ = std::numeric_limits<double>::infinity();
  Vec best_x_;
  std::vector<std::pair<int, double>> trace_;
};

Vec axpy(double a, const Vec& x, double b, const Vec& y) {
  Vec out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * y[i];
  return out;
}

OptResult nelder_mead(const Objective& objective, const Vec& x0, const NelderMeadConfig& cfg) {
  constexpr double rho = 1.0, chi = 2.0, psi = 0.5, sigma = 0.5;
  Tracker f(objective);
  const size_t n = x0.size();
  std::vector<Vec> sim{x0};
  std::vector<double> fsim{f(x0)};
  f.mark(0);
  if (cfg.max_iter <= 0 || n == 0) return f.result(0);
  for (size_t k = 0; k < n; ++k) {
    Vec y = x0;
    y[k] += cfg.init_simplex_scale;
    sim.push_back(y);
    fsim.push_back(f(y));
  }
  auto sort_simplex = [&] {
    std::vector<size_t> order(n + 1);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return fsim[a] < fsim[b]; });
    std::vector<Vec> s2;
    std::vector<double> f2;
    for (size_t i : order) {
      s2.push_back(sim[i]);
      f2.push_back(fsim[i]);
    }
    sim.swap(s2);
    fsim.swap(f2);
  };
  sort_simplex();

  int it = 0;
  while (it < cfg.max_iter) {
    double xspread = 0.0, fspread = 0.0;
    for (size_t j = 1; j <= n; ++j) {
      fspread = std::max(fspread, std::abs(fsim[j] - fsim[0]));
      for (size_t k = 0; k < n; ++k) xspread = std::max(xspread, std::abs(sim[j][k] - sim[0][k]));
    }
    if (xspread <= cfg.x_tol && fspread <= cfg.f_tol) break;
    ++it;

    Vec xbar(n, 0.0);
    for (size_t j = 0; j < n; ++j) {
      for (size_t k = 0; k < n; ++k) xbar[k] += sim[j][k] / static_cast<double>(n);
    }
    const Vec& worst = sim[n];
    Vec xr = axpy(1 + rho, xbar, -rho, worst);
    const double fxr = f(xr);
    bool shrink = false;
    if (fxr < fsim[0]) {
      Vec xe = axpy(1 + rho * chi, xbar, -rho * chi, worst);
      const double fxe = f(xe);
      if (fxe < fxr) {
        sim[n] = xe;
        fsim[n] = fxe;
      } else {
        sim[n] = xr;
        fsim[n] = fxr;
      }
    } else if (fxr < fsim[n - 1]) {
      sim[n] = xr;
      fsim[n] = fxr;
    } else if (fxr < fsim[n]) {
      Vec xc = axpy(1 + psi * rho, xbar, -psi * rho, worst);
      const double fxc = f(xc);
      if (fxc <= fxr) {
        sim[n] = xc;
        fsim[n] = fxc;
      } else {
        shrink = true;
      }
    } else {
      Vec xcc = axpy(1 - psi, xbar, psi, worst);
      const double fxcc = f(xcc);
      if (fxcc < fsim[n]) {
        sim[n] = xcc;
        fsim[n] = fxcc;
      } else {
        shrink = true;
      }
    }
    if (shrink) {
      for (size_t j = 1; j <= n; ++j) {
        sim[j] = axpy(1 - sigma, sim[0], sigma, sim[j]);
        fsim[j] = f(sim[j]);
      }
    }
    sort_simplex();
    f.mark(it);
  }
  return f.result(it);
}

OptResult spsa(const Objective& objective, const Vec& x0, const SpsaConfig& cfg, std::uint64_t seed) {
  if (cfg.a <= 0 || cfg.c <= 0) throw InputError("SPSA a and c must be positive");
  Tracker f(objective);
  auto rng = make_rng(seed);
  Objective tracked = [&f](const Vec& x) { return f(x); };
  Vec x = x0;
  f(x);
  f.mark(0);
  for (int k = 0; k < cfg.n_iter; ++k) {
    x = spsa_step(tracked, x, k, cfg, rng);
    f.mark(k + 1);
  }
  if (cfg.n_iter > 0) f(x);
  return f.result(cfg.n_iter);
}

Eigen::VectorXd central_gradient(Tracker& f, const Eigen::VectorXd& x, double eps) {
  const Eigen::Index n = x.size();
  Eigen::VectorXd g(n);
  Vec xp(x.data(), x.data() + n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double orig = xp[static_cast<size_t>(i)];
    xp[static_cast<size_t>(i)] = orig + eps;
    const double fp = f(xp);
    xp[static_cast<size_t>(i)] = orig - eps;
    const double fm = f(xp);
    xp[static_cast<size_t>(i)] = orig;
    g(i) = (fp - fm) / (2 * eps);
  }
  return g;
}

OptResult fd_quasi_newton(const Objective& objective, const Vec& x0, const FdQuasiNewtonConfig& cfg) {
  if (cfg.eps <= 0) throw InputError("finite-difference step must be positive");
  Tracker f(objective);
  const Eigen::Index n = static_cast<Eigen::Index>(x0.size());
  auto to_vec = [](const Eigen::VectorXd& v) { return Vec(v.data(), v.data() + v.size()); };
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(x0.data(), n);
  double fx = f(x0);
  f.mark(0);
  if (cfg.max_iter <= 0 || n == 0) return f.result(0);
  Eigen::VectorXd g = central_gradient(f, x, cfg.eps);
  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n, n);
  bool fresh = true;  // H is an unscaled identity
  int it = 0;
  while (it < cfg.max_iter) {
    if (g.lpNorm<Eigen::Infinity>() < cfg.g_tol) break;
    ++it;
    Eigen::VectorXd p = -H * g;
    double slope = g.dot(p);
    if (!(slope < 0)) {
      H.setIdentity();
      fresh = true;
      p = -g;
      slope = -g.squaredNorm();
    }
    double t = 1.0;
    double fn = 0.0;
    bool accepted = false;
    Eigen::VectorXd xn;
    for (int bt = 0; bt < 60; ++bt) {
      xn = x + t * p;
      fn = f(to_vec(xn));
      if (fn <= fx + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      if (fresh) break;
      H.setIdentity();
      fresh = true;
      f.mark(it);
      continue;
    }
    Eigen::VectorXd gn = central_gradient(f, xn, cfg.eps);
    Eigen::VectorXd s = xn - x;
    Eigen::VectorXd y = gn - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (fresh) {
        H *= sy / y.squaredNorm();
        fresh = false;
      }
      const double r = 1.0 / sy;
      Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
      H = (I - r * s * y.transpose()) * H * (I - r * y * s.transpose()) + r * s * s.transpose();
    }
    const bool stalled = std::abs(fx - fn) <= 1e-15 * std::max(1.0, std::abs(fx)) && s.norm() < 1e-14;
    x = xn;
    fx = fn;
    g = gn;
    f.mark(it);
    if (stalled) break;
  }
  return f.result(it);
}

}  // namespace

std::pair<double, double> spsa_schedules(const SpsaConfig& config, int k) {
  const double step = config.a / std::pow(0.01 * config.n_iter + k + 1, config.alpha);
  const double eps = config.c / std::pow(k + 1.0, config.gamma);
  return {step, eps};
}

std::vector<double> spsa_step(const Objective& objective, const std::vector<double>& theta, int k,
                              const SpsaConfig& config, Rng& rng, std::vector<double>* gradient) {
  const auto [step, eps] = spsa_schedules(config, k);
  const size_t n = theta.size();
  Vec delta(n);
  for (size_t i = 0; i < n; ++i) delta[i] = (rng() & 1U) ? 1.0 : -1.0;
  const double fp = objective(axpy(1.0, theta, eps, delta));
  const double fm = objective(axpy(1.0, theta, -eps, delta));
  Vec out(n);
  Vec g(n);
  for (size_t i = 0; i < n; ++i) {
    g[i] = (fp - fm) / (2 * eps) / delta[i];
    out[i] = theta[i] - step * g[i];
  }
  if (gradient) *gradient = g;
  return out;
}

OptResult minimize(const Objective& objective, const std::vector<double>& x0, const OptimizerConfig& config,
                   std::uint64_t seed) {
  return std::visit(
      [&](const auto& cfg) -> OptResult {
        using T = std::decay_t<decltype(cfg)>;
        if constexpr (std::is_same_v<T, NelderMeadConfig>) {
          return nelder_mead(objective, x0, cfg);
        } else if constexpr (std::is_same_v<T, SpsaConfig>) {
          return spsa(objective, x0, cfg, seed);
        } else {
          return fd_quasi_newton(objective, x0, cfg);
        }
      },
      config);
}

std::string optimizer_name(const OptimizerConfig& config) {
  switch (config.index()) {
    case 0:
      return "nelder-mead";
    case 1:
      return "spsa";
    default:
      return "fd-quasi-newton";
  }
}

}  // namespace qlocate
