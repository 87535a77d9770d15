#include "qlocate/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>

#include <Eigen/Eigenvalues>

#include "qlocate/error.hpp"
#include "qlocate/rng.hpp"

namespace qlocate {

namespace {

void check_qubits(int n) {
  if (n < 0 || n > kStateQubitCap) {
    throw CapacityError("state of " + std::to_string(n) + " qubits exceeds the cap of " +
                        std::to_string(kStateQubitCap));
  }
}

void check_qubit(const StateVector& s, int q) {
  if (q < 0 || q >= s.n()) {
    throw InputError("qubit " + std::to_string(q) + " outside a " + std::to_string(s.n()) + "-qubit state");
  }
}

void check_diag(const StateVector& s, const std::vector<double>& diag) {
  if (diag.size() != s.dim()) {
    throw InputError("diagonal of length " + std::to_string(diag.size()) + " does not match state dimension " +
                     std::to_string(s.dim()));
  }
}

Index scatter_mask(const std::vector<int>& qubits) {
  Index m = 0;
  for (int q : qubits) m |= Index{1} << q;
  return m;
}

// offsets[local] = the global bit pattern of a local basis index.
std::vector<Index> local_offsets(const std::vector<int>& qubits) {
  const size_t k = qubits.size();
  std::vector<Index> off(size_t{1} << k, 0);
  for (size_t local = 0; local < off.size(); ++local) {
    for (size_t j = 0; j < k; ++j) {
      if ((local >> j) & 1U) off[local] |= Index{1} << qubits[j];
    }
  }
  return off;
}

void check_distinct(const StateVector& s, const std::vector<int>& qubits) {
  Index seen = 0;
  for (int q : qubits) {
    check_qubit(s, q);
    if (seen & (Index{1} << q)) throw InputError("repeated qubit " + std::to_string(q));
    seen |= Index{1} << q;
  }
}

// Eigendecomposition of the ring hopping Hamiltonian, one block per weight sector.
struct RingSectors {
  int m = 0;
  std::vector<std::vector<int>> members;  // local indices with weight w
  std::vector<Eigen::MatrixXd> vectors;
  std::vector<Eigen::VectorXd> values;
};

std::shared_ptr<const RingSectors> ring_sectors(int m) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const RingSectors>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;

  auto rs = std::make_shared<RingSectors>();
  rs->m = m;
  std::vector<std::pair<int, int>> edges;
  if (m == 2) {
    edges.emplace_back(0, 1);
  } else {
    for (int k = 0; k < m; ++k) edges.emplace_back(k, (k + 1) % m);
  }
  rs->members.resize(static_cast<size_t>(m + 1));
  std::vector<int> position(size_t{1} << m);
  for (int local = 0; local < (1 << m); ++local) {
    auto& mem = rs->members[static_cast<size_t>(std::popcount(static_cast<unsigned>(local)))];
    position[static_cast<size_t>(local)] = static_cast<int>(mem.size());
    mem.push_back(local);
  }
  for (int w = 0; w <= m; ++w) {
    const auto& mem = rs->members[static_cast<size_t>(w)];
    const auto d = static_cast<Eigen::Index>(mem.size());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
    // 1/2 (XX + YY) swaps 01 <-> 10 with unit amplitude and annihilates 00, 11
    for (Eigen::Index r = 0; r < d; ++r) {
      const int x = mem[static_cast<size_t>(r)];
      for (auto [a, b] : edges) {
        if (((x >> a) & 1) != ((x >> b) & 1)) {
          const int y = x ^ (1 << a) ^ (1 << b);
          h(position[static_cast<size_t>(y)], r) += 1.0;
        }
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    rs->vectors.push_back(es.eigenvectors());
    rs->values.push_back(es.eigenvalues());
  }
  cache[m] = rs;
  return rs;
}

}  // namespace

StateVector::StateVector(int n) : n_(n) {
  check_qubits(n);
  amp_.assign(dim(), Complex(0.0, 0.0));
  amp_[0] = 1.0;
}

double StateVector::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amp_) s += std::norm(a);
  return s;
}

std::vector<double> StateVector::probabilities() const {
  std::vector<double> p(amp_.size());
  for (size_t i = 0; i < amp_.size(); ++i) p[i] = std::norm(amp_[i]);
  return p;
}

std::int64_t SampleSet::count(const std::string& s) const {
  auto it = counts.find(from_bitstring(s, n));
  return it == counts.end() ? 0 : it->second;
}

StateVector basis_state(int n, Index x) {
  StateVector s(n);
  if (x >= s.dim()) throw InputError("basis index outside the state");
  s[0] = 0.0;
  s[x] = 1.0;
  return s;
}

StateVector uniform_state(int n) {
  StateVector s(n);
  const double a = std::pow(2.0, -0.5 * n);
  std::fill(s.amplitudes().begin(), s.amplitudes().end(), Complex(a, 0.0));
  return s;
}

StateVector dicke_state(int n, int k) {
  if (k < 0 || k > n) {
    throw InputError("Dicke weight " + std::to_string(k) + " outside 0.." + std::to_string(n));
  }
  StateVector s(n);
  s[0] = 0.0;
  const double a = 1.0 / std::sqrt(binomial(n, k));
  for (Index x = 0; x < s.dim(); ++x) {
    if (popcount(x) == k) s[x] = a;
  }
  return s;
}

StateVector block_product_state(int n, const std::vector<Block>& blocks) {
  check_qubits(n);
  Index covered = 0;
  for (const auto& b : blocks) {
    for (int q : b.qubits) {
      if (q < 0 || q >= n) throw InputError("block qubit " + std::to_string(q) + " outside the state");
      if (covered & (Index{1} << q)) throw InputError("blocks overlap on qubit " + std::to_string(q));
      covered |= Index{1} << q;
    }
    if (b.weight.has_value() == b.pattern.has_value()) {
      throw InputError("a block needs exactly one of weight and pattern");
    }
    if (b.pattern && b.pattern->size() != b.qubits.size()) {
      throw InputError("block pattern length does not match its qubit count");
    }
    if (b.weight && (*b.weight < 0 || *b.weight > static_cast<int>(b.qubits.size()))) {
      throw InputError("block weight out of range");
    }
  }
  if (covered != (n == 64 ? ~Index{0} : (Index{1} << n) - 1)) {
    throw InputError("blocks do not cover every qubit");
  }
  // Build the product one block at a time over the support.
  std::vector<std::pair<Index, double>> support{{0, 1.0}};
  for (const auto& b : blocks) {
    const auto off = local_offsets(b.qubits);
    std::vector<std::pair<Index, double>> factor;
    if (b.pattern) {
      const Index local = from_bitstring(*b.pattern);
      factor.emplace_back(off[local], 1.0);
    } else {
      const double a = 1.0 / std::sqrt(binomial(static_cast<int>(b.qubits.size()), *b.weight));
      for (size_t local = 0; local < off.size(); ++local) {
        if (std::popcount(local) == *b.weight) factor.emplace_back(off[local], a);
      }
    }
    std::vector<std::pair<Index, double>> next;
    next.reserve(support.size() * factor.size());
    for (const auto& [x, ax] : support) {
      for (const auto& [y, ay] : factor) next.emplace_back(x | y, ax * ay);
    }
    support = std::move(next);
  }
  StateVector s(n);
  s[0] = 0.0;
  for (const auto& [x, a] : support) s[x] = a;
  return s;
}

void apply_diagonal_phase(StateVector& state, const std::vector<double>& diag, double gamma) {
  check_diag(state, diag);
  auto& amp = state.amplitudes();
  for (size_t i = 0; i < amp.size(); ++i) {
    if (amp[i] == Complex(0.0, 0.0)) continue;
    const double phi = -gamma * diag[i];
    amp[i] *= Complex(std::cos(phi), std::sin(phi));
  }
}

void apply_phase_separator(StateVector& state, const QuboModel& model, double gamma) {
  if (model.n() != state.n()) throw InputError("model and state sizes differ");
  apply_diagonal_phase(state, energy_table(model), gamma);
}

void apply_phase_separator(StateVector& state, const IsingModel& model, double gamma) {
  if (model.n() != state.n()) throw InputError("model and state sizes differ");
  apply_diagonal_phase(state, energy_table(model), gamma);
}

void apply_x_mixer(StateVector& state, double beta) {
  const Complex c(std::cos(beta), 0.0);
  const Complex ms(0.0, -std::sin(beta));
  auto& amp = state.amplitudes();
  const Index dim = state.dim();
  for (int q = 0; q < state.n(); ++q) {
    const Index stride = Index{1} << q;
    for (Index base = 0; base < dim; base += 2 * stride) {
      for (Index i = base; i < base + stride; ++i) {
        const Complex a0 = amp[i];
        const Complex a1 = amp[i + stride];
        amp[i] = c * a0 + ms * a1;
        amp[i + stride] = ms * a0 + c * a1;
      }
    }
  }
}

void apply_xy_ring_mixer(StateVector& state, const std::vector<int>& ring, double beta) {
  const int m = static_cast<int>(ring.size());
  if (m < 2) throw InputError("an XY ring needs at least two qubits");
  if (m > kRingCap) {
    throw CapacityError("XY ring of " + std::to_string(m) + " qubits exceeds the cap of " +
                        std::to_string(kRingCap));
  }
  check_distinct(state, ring);
  const auto rs = ring_sectors(m);
  const auto off = local_offsets(ring);
  const Index mask = scatter_mask(ring);

  std::vector<Eigen::MatrixXcd> u(static_cast<size_t>(m + 1));
  for (int w = 0; w <= m; ++w) {
    const auto& v = rs->vectors[static_cast<size_t>(w)];
    const auto& e = rs->values[static_cast<size_t>(w)];
    Eigen::VectorXcd phase(e.size());
    for (Eigen::Index k = 0; k < e.size(); ++k) phase(k) = std::polar(1.0, -beta * e(k));
    u[static_cast<size_t>(w)] = v.cast<Complex>() * phase.asDiagonal() * v.transpose().cast<Complex>();
  }

  auto& amp = state.amplitudes();
  Eigen::VectorXcd in, out;
  for (Index outer = 0; outer < state.dim(); ++outer) {
    if (outer & mask) continue;
    for (int w = 0; w <= m; ++w) {
      const auto& mem = rs->members[static_cast<size_t>(w)];
      const auto d = static_cast<Eigen::Index>(mem.size());
      in.resize(d);
      bool any = false;
      for (Eigen::Index r = 0; r < d; ++r) {
        in(r) = amp[outer | off[static_cast<size_t>(mem[static_cast<size_t>(r)])]];
        any = any || in(r) != Complex(0.0, 0.0);
      }
      if (!any) continue;
      out.noalias() = u[static_cast<size_t>(w)] * in;
      for (Eigen::Index r = 0; r < d; ++r) amp[outer | off[static_cast<size_t>(mem[static_cast<size_t>(r)])]] = out(r);
    }
  }
}

void apply_local_unitary(StateVector& state, const std::vector<int>& qubits, const Eigen::MatrixXcd& u) {
  const int k = static_cast<int>(qubits.size());
  if (k > kLocalUnitaryCap) {
    throw CapacityError("local unitary on " + std::to_string(k) + " qubits exceeds the cap of " +
                        std::to_string(kLocalUnitaryCap));
  }
  check_distinct(state, qubits);
  const Eigen::Index d = Eigen::Index{1} << k;
  if (u.rows() != d || u.cols() != d) throw InputError("unitary dimension does not match the qubit count");
  if (!(u.adjoint() * u).isIdentity(1e-10)) throw InputError("matrix is not unitary within 1e-10");

  const auto off = local_offsets(qubits);
  const Index mask = scatter_mask(qubits);
  auto& amp = state.amplitudes();
  Eigen::VectorXcd in(d), out(d);
  for (Index outer = 0; outer < state.dim(); ++outer) {
    if (outer & mask) continue;
    for (Eigen::Index r = 0; r < d; ++r) in(r) = amp[outer | off[static_cast<size_t>(r)]];
    out.noalias() = u * in;
    for (Eigen::Index r = 0; r < d; ++r) amp[outer | off[static_cast<size_t>(r)]] = out(r);
  }
}

void apply_ry(StateVector& state, int qubit, double theta) {
  check_qubit(state, qubit);
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  auto& amp = state.amplitudes();
  const Index stride = Index{1} << qubit;
  for (Index base = 0; base < state.dim(); base += 2 * stride) {
    for (Index i = base; i < base + stride; ++i) {
      const Complex a0 = amp[i];
      const Complex a1 = amp[i + stride];
      amp[i] = c * a0 - s * a1;
      amp[i + stride] = s * a0 + c * a1;
    }
  }
}

void apply_cnot(StateVector& state, int control, int target) {
  check_qubit(state, control);
  check_qubit(state, target);
  if (control == target) throw InputError("CNOT control and target must differ");
  const Index cm = Index{1} << control;
  const Index tm = Index{1} << target;
  auto& amp = state.amplitudes();
  for (Index x = 0; x < state.dim(); ++x) {
    if ((x & cm) && !(x & tm)) std::swap(amp[x], amp[x | tm]);
  }
}

double expectation(const StateVector& state, const std::vector<double>& diag) {
  check_diag(state, diag);
  double e = 0.0;
  const auto& amp = state.amplitudes();
  for (size_t i = 0; i < amp.size(); ++i) e += std::norm(amp[i]) * diag[i];
  return e;
}

double expectation(const StateVector& state, const QuboModel& model) {
  if (model.n() != state.n()) throw InputError("model and state sizes differ");
  return expectation(state, energy_table(model));
}

double expectation(const StateVector& state, const IsingModel& model) {
  if (model.n() != state.n()) throw InputError("model and state sizes differ");
  return expectation(state, energy_table(model));
}

SampleSet sample_distribution(int n, const std::vector<double>& probs, std::int64_t shots,
                              std::uint64_t seed) {
  if (shots < 1) throw InputError("shot count must be positive");
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    cdf[i] = acc;
  }
  auto rng = make_rng(seed);
  SampleSet out;
  out.n = n;
  out.shots = shots;
  for (std::int64_t k = 0; k < shots; ++k) {
    const double u = uniform01(rng) * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    size_t idx = static_cast<size_t>(it - cdf.begin());
    if (it == cdf.end()) {
      idx = probs.size() - 1;
      while (idx > 0 && probs[idx] == 0.0) --idx;
    }
    ++out.counts[static_cast<Index>(idx)];
  }
  return out;
}

SampleSet sample(const StateVector& state, std::int64_t shots, std::uint64_t seed) {
  return sample_distribution(state.n(), state.probabilities(), shots, seed);
}

}  // namespace qlocate
