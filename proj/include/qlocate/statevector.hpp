#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qlocate/bits.hpp"
#include "qlocate/ising.hpp"

namespace qlocate {

using Complex = std::complex<double>;

inline constexpr int kStateQubitCap = 24;
inline constexpr int kRingCap = 12;
inline constexpr int kLocalUnitaryCap = 12;

/// 2^n complex amplitudes; basis index bit i is qubit i.
class StateVector {
 public:
  StateVector() = default;
  /// |0...0>.
  explicit StateVector(int n);

  int n() const { return n_; }
  Index dim() const { return Index{1} << n_; }
  std::vector<Complex>& amplitudes() { return amp_; }
  const std::vector<Complex>& amplitudes() const { return amp_; }
  Complex operator[](Index i) const { return amp_[i]; }
  Complex& operator[](Index i) { return amp_[i]; }

  double norm_squared() const;
  std::vector<double> probabilities() const;

 private:
  int n_ = 0;
  std::vector<Complex> amp_;
};

struct SampleSet {
  int n = 0;
  std::map<Index, std::int64_t> counts;
  std::int64_t shots = 0;

  std::int64_t count(const std::string& s) const;
};

StateVector basis_state(int n, Index x);
StateVector uniform_state(int n);
StateVector dicke_state(int n, int k);

/// One factor of a block product: a Dicke state of `weight` on `qubits`, or the
/// basis string `pattern` (one character per listed qubit).
struct Block {
  std::vector<int> qubits;
  std::optional<int> weight;
  std::optional<std::string> pattern;
};

/// Tensor product of the blocks, which must partition 0..n-1.
StateVector block_product_state(int n, const std::vector<Block>& blocks);

/// amp(z) *= exp(-i gamma diag[z]).
void apply_diagonal_phase(StateVector& state, const std::vector<double>& diag, double gamma);
void apply_phase_separator(StateVector& state, const QuboModel& model, double gamma);
void apply_phase_separator(StateVector& state, const IsingModel& model, double gamma);

/// exp(-i beta X) on every qubit.
void apply_x_mixer(StateVector& state, double beta);

/// exp(-i beta H_XY) on the ring, H_XY = 1/2 sum over ring edges of (XX + YY).
/// A two-qubit ring has the single edge (r0, r1).
void apply_xy_ring_mixer(StateVector& state, const std::vector<int>& ring, double beta);

/// Dense 2^k x 2^k unitary on `qubits`; local bit j is qubits[j].
void apply_local_unitary(StateVector& state, const std::vector<int>& qubits, const Eigen::MatrixXcd& u);

void apply_ry(StateVector& state, int qubit, double theta);
void apply_cnot(StateVector& state, int control, int target);

/// Sum_z |amp(z)|^2 diag[z].
double expectation(const StateVector& state, const std::vector<double>& diag);
double expectation(const StateVector& state, const QuboModel& model);
double expectation(const StateVector& state, const IsingModel& model);

/// i.i.d. computational-basis draws from |amp|^2.
SampleSet sample(const StateVector& state, std::int64_t shots, std::uint64_t seed);

/// Same draws as `sample` from an explicit distribution.
SampleSet sample_distribution(int n, const std::vector<double>& probs, std::int64_t shots,
                              std::uint64_t seed);

}  // namespace qlocate
