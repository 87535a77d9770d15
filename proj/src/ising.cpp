#include "qlocate/ising.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "qlocate/error.hpp"

namespace qlocate {

namespace {

void check_index(int i, int n) {
  if (i < 0 || i >= n) {
    throw InputError("variable index " + std::to_string(i) + " outside model of size " +
                     std::to_string(n));
  }
}

void accumulate(std::map<int, double>& m, int key, double c) {
  double& v = m[key];
  v += c;
  if (v == 0.0) m.erase(key);
}

void accumulate(std::map<Pair, double>& m, Pair key, double c) {
  double& v = m[key];
  v += c;
  if (v == 0.0) m.erase(key);
}

std::string format_real(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_real(const std::string& tok) {
  double v = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
    throw InputError("cannot parse real value: " + tok);
  }
  return v;
}

}  // namespace

QuboModel::QuboModel(int n) : n_(n) {
  if (n < 0) throw InputError("negative variable count");
}

void QuboModel::add_linear(int i, double c) {
  check_index(i, n_);
  if (c != 0.0) accumulate(linear_, i, c);
}

void QuboModel::add_quadratic(int i, int j, double c) {
  check_index(i, n_);
  check_index(j, n_);
  if (c == 0.0) return;
  if (i == j) {
    accumulate(linear_, i, c);
    return;
  }
  accumulate(quadratic_, {std::min(i, j), std::max(i, j)}, c);
}

QuboModel QuboModel::scaled(double alpha) const {
  QuboModel out(n_);
  out.offset_ = offset_ * alpha;
  for (auto [i, c] : linear_) out.add_linear(i, alpha * c);
  for (auto [ij, c] : quadratic_) out.add_quadratic(ij.first, ij.second, alpha * c);
  return out;
}

IsingModel::IsingModel(int n) : n_(n) {
  if (n < 0) throw InputError("negative variable count");
}

void IsingModel::add_field(int i, double c) {
  check_index(i, n_);
  if (c != 0.0) accumulate(h_, i, c);
}

void IsingModel::add_coupling(int i, int j, double c) {
  check_index(i, n_);
  check_index(j, n_);
  if (c == 0.0) return;
  if (i == j) {
    offset_ += c;
    return;
  }
  accumulate(J_, {std::min(i, j), std::max(i, j)}, c);
}

double energy_qubo(const QuboModel& model, Index s) {
  double e = model.offset();
  for (auto [i, c] : model.linear()) {
    if (bit(s, i)) e += c;
  }
  for (auto [ij, c] : model.quadratic()) {
    if (bit(s, ij.first) && bit(s, ij.second)) e += c;
  }
  return e;
}

double energy_qubo(const QuboModel& model, const std::string& s) {
  return energy_qubo(model, from_bitstring(s, model.n()));
}

double energy_ising(const IsingModel& model, Index s) {
  double e = model.offset();
  for (auto [i, c] : model.h()) e += c * (1 - 2 * bit(s, i));
  for (auto [ij, c] : model.J()) {
    e += c * ((bit(s, ij.first) == bit(s, ij.second)) ? 1.0 : -1.0);
  }
  return e;
}

double energy_ising(const IsingModel& model, const std::vector<int>& z) {
  if (static_cast<int>(z.size()) != model.n()) {
    throw InputError("spin string length " + std::to_string(z.size()) + " does not match " +
                     std::to_string(model.n()) + " variables");
  }
  return energy_ising(model, from_spins(z));
}

IsingModel qubo_to_ising(const QuboModel& model) {
  // s_i = (1 - z_i) / 2
  IsingModel out(model.n());
  out.add_offset(model.offset());
  for (auto [i, c] : model.linear()) {
    out.add_offset(c / 2);
    out.add_field(i, -c / 2);
  }
  for (auto [ij, c] : model.quadratic()) {
    out.add_offset(c / 4);
    out.add_field(ij.first, -c / 4);
    out.add_field(ij.second, -c / 4);
    out.add_coupling(ij.first, ij.second, c / 4);
  }
  return out;
}

QuboModel ising_to_qubo(const IsingModel& model) {
  // z_i = 1 - 2 s_i
  QuboModel out(model.n());
  out.add_offset(model.offset());
  for (auto [i, c] : model.h()) {
    out.add_offset(c);
    out.add_linear(i, -2 * c);
  }
  for (auto [ij, c] : model.J()) {
    out.add_offset(c);
    out.add_linear(ij.first, -2 * c);
    out.add_linear(ij.second, -2 * c);
    out.add_quadratic(ij.first, ij.second, 4 * c);
  }
  return out;
}

std::vector<double> energy_table(const QuboModel& model) {
  const int n = model.n();
  if (n > kSpectrumQubitCap) {
    throw CapacityError("enumeration over " + std::to_string(n) + " variables exceeds the cap of " +
                        std::to_string(kSpectrumQubitCap));
  }
  const Index size = Index{1} << n;
  std::vector<double> table(size, model.offset());
  // Each term is added over the states where it is active, one bit plane at a time.
  for (auto [i, c] : model.linear()) {
    const Index mask = Index{1} << i;
    for (Index x = 0; x < size; ++x) {
      if (x & mask) table[x] += c;
    }
  }
  for (auto [ij, c] : model.quadratic()) {
    const Index mask = (Index{1} << ij.first) | (Index{1} << ij.second);
    for (Index x = 0; x < size; ++x) {
      if ((x & mask) == mask) table[x] += c;
    }
  }
  return table;
}

std::vector<double> energy_table(const IsingModel& model) {
  const int n = model.n();
  if (n > kSpectrumQubitCap) {
    throw CapacityError("enumeration over " + std::to_string(n) + " variables exceeds the cap of " +
                        std::to_string(kSpectrumQubitCap));
  }
  const Index size = Index{1} << n;
  std::vector<double> table(size, model.offset());
  for (auto [i, c] : model.h()) {
    for (Index x = 0; x < size; ++x) table[x] += bit(x, i) ? -c : c;
  }
  for (auto [ij, c] : model.J()) {
    for (Index x = 0; x < size; ++x) table[x] += (bit(x, ij.first) == bit(x, ij.second)) ? c : -c;
  }
  return table;
}

std::vector<SpectrumEntry> enumerate_spectrum(const QuboModel& model,
                                              const std::optional<StatePredicate>& feasible,
                                              double tolerance) {
  const int n = model.n();
  if (n > kSpectrumQubitCap) {
    throw CapacityError("enumeration over " + std::to_string(n) + " variables exceeds the cap of " +
                        std::to_string(kSpectrumQubitCap));
  }
  std::vector<std::pair<double, Index>> states;
  const Index size = Index{1} << n;
  for (Index x = 0; x < size; ++x) {
    if (feasible && !(*feasible)(x)) continue;
    states.emplace_back(energy_qubo(model, x), x);
  }
  std::sort(states.begin(), states.end());
  std::vector<SpectrumEntry> out;
  for (const auto& [e, x] : states) {
    if (out.empty() || e - out.back().energy > tolerance) {
      out.push_back(SpectrumEntry{e, {}});
    }
    out.back().states.push_back(to_bitstring(x, n));
  }
  return out;
}

std::string to_text(const QuboModel& model) {
  std::ostringstream os;
  os << "n " << model.n() << "\n";
  os << "offset " << format_real(model.offset()) << "\n";
  for (auto [i, c] : model.linear()) os << "lin " << i << " " << format_real(c) << "\n";
  for (auto [ij, c] : model.quadratic()) {
    os << "quad " << ij.first << " " << ij.second << " " << format_real(c) << "\n";
  }
  return os.str();
}

QuboModel qubo_from_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::optional<QuboModel> model;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key) || key[0] == '#') continue;
    auto need_model = [&]() -> QuboModel& {
      if (!model) throw InputError("line " + std::to_string(lineno) + ": `n` must come first");
      return *model;
    };
    std::string a, b, c;
    if (key == "n") {
      int n = 0;
      if (!(ls >> n)) throw InputError("line " + std::to_string(lineno) + ": bad `n`");
      model.emplace(n);
    } else if (key == "offset" && (ls >> a)) {
      need_model().add_offset(parse_real(a));
    } else if (key == "lin" && (ls >> a >> b)) {
      need_model().add_linear(std::stoi(a), parse_real(b));
    } else if (key == "quad" && (ls >> a >> b >> c)) {
      need_model().add_quadratic(std::stoi(a), std::stoi(b), parse_real(c));
    } else {
      throw InputError("line " + std::to_string(lineno) + ": cannot parse `" + line + "`");
    }
  }
  if (!model) throw InputError("model text has no `n` line");
  return *model;
}

CompiledQubo::CompiledQubo(const QuboModel& model)
    : n(model.n()),
      offset(model.offset()),
      linear(static_cast<size_t>(model.n()), 0.0),
      neighbors(static_cast<size_t>(model.n())) {
  for (auto [i, c] : model.linear()) linear[static_cast<size_t>(i)] = c;
  for (auto [ij, c] : model.quadratic()) {
    neighbors[static_cast<size_t>(ij.first)].emplace_back(ij.second, c);
    neighbors[static_cast<size_t>(ij.second)].emplace_back(ij.first, c);
  }
}

double CompiledQubo::energy(const std::vector<std::uint8_t>& s) const {
  double e = offset;
  for (int i = 0; i < n; ++i) {
    if (!s[static_cast<size_t>(i)]) continue;
    e += linear[static_cast<size_t>(i)];
    for (auto [j, c] : neighbors[static_cast<size_t>(i)]) {
      if (j > i && s[static_cast<size_t>(j)]) e += c;
    }
  }
  return e;
}

double CompiledQubo::flip_delta(const std::vector<std::uint8_t>& s, int i) const {
  double field = linear[static_cast<size_t>(i)];
  for (auto [j, c] : neighbors[static_cast<size_t>(i)]) {
    if (s[static_cast<size_t>(j)]) field += c;
  }
  return s[static_cast<size_t>(i)] ? -field : field;
}

}  // namespace qlocate
