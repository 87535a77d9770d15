#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qlocate/bits.hpp"

namespace qlocate {

using Pair = std::pair<int, int>;

/// Quadratic cost over binary variables s_i in {0,1}.
class QuboModel {
 public:
  QuboModel() = default;
  explicit QuboModel(int n);

  int n() const { return n_; }
  double offset() const { return offset_; }
  const std::map<int, double>& linear() const { return linear_; }
  const std::map<Pair, double>& quadratic() const { return quadratic_; }

  /// Accumulates c into s_i. Entries that cancel to zero are dropped.
  void add_linear(int i, double c);
  /// Accumulates c into s_i s_j; i == j folds into the linear term.
  void add_quadratic(int i, int j, double c);
  void add_offset(double c) { offset_ += c; }

  QuboModel scaled(double alpha) const;

  bool operator==(const QuboModel&) const = default;

 private:
  int n_ = 0;
  double offset_ = 0.0;
  std::map<int, double> linear_;
  std::map<Pair, double> quadratic_;
};

/// Quadratic cost over spins z_i in {-1,+1}.
class IsingModel {
 public:
  IsingModel() = default;
  explicit IsingModel(int n);

  int n() const { return n_; }
  double offset() const { return offset_; }
  const std::map<int, double>& h() const { return h_; }
  const std::map<Pair, double>& J() const { return J_; }

  void add_field(int i, double c);
  /// i == j contributes the constant z_i^2 = 1.
  void add_coupling(int i, int j, double c);
  void add_offset(double c) { offset_ += c; }

  /// Number of nonzero fields plus couplings.
  int term_count() const { return static_cast<int>(h_.size() + J_.size()); }

  bool operator==(const IsingModel&) const = default;

 private:
  int n_ = 0;
  double offset_ = 0.0;
  std::map<int, double> h_;
  std::map<Pair, double> J_;
};

struct SpectrumEntry {
  double energy = 0.0;
  std::vector<std::string> states;
};

using StatePredicate = std::function<bool(Index)>;

double energy_qubo(const QuboModel& model, const std::string& s);
double energy_qubo(const QuboModel& model, Index s);
double energy_ising(const IsingModel& model, const std::vector<int>& z);
double energy_ising(const IsingModel& model, Index s);

IsingModel qubo_to_ising(const QuboModel& model);
QuboModel ising_to_qubo(const IsingModel& model);

inline constexpr int kSpectrumQubitCap = 26;

/// Exact spectrum over all 2^n states, or only those accepted by `feasible`.
/// Energies closer than `tolerance` share an entry.
std::vector<SpectrumEntry> enumerate_spectrum(
    const QuboModel& model, const std::optional<StatePredicate>& feasible = std::nullopt,
    double tolerance = 1e-9);

/// Energy of every basis state, indexed by basis index. Capped like the spectrum.
std::vector<double> energy_table(const QuboModel& model);
std::vector<double> energy_table(const IsingModel& model);

/// Flat text form: `n`, `offset`, `lin i c`, `quad i j c` lines.
std::string to_text(const QuboModel& model);
QuboModel qubo_from_text(const std::string& text);

/// Compact adjacency form for repeated single-flip evaluation.
struct CompiledQubo {
  int n = 0;
  double offset = 0.0;
  std::vector<double> linear;
  std::vector<std::vector<std::pair<int, double>>> neighbors;

  explicit CompiledQubo(const QuboModel& model);
  double energy(const std::vector<std::uint8_t>& s) const;
  /// Energy change from flipping variable i.
  double flip_delta(const std::vector<std::uint8_t>& s, int i) const;
};

}  // namespace qlocate
