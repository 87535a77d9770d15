#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "qlocate/encoders.hpp"
#include "qlocate/error.hpp"
#include "qlocate/rng.hpp"
#include "qlocate/statevector.hpp"

using namespace qlocate;

namespace {

constexpr double kPi = std::numbers::pi;

double max_diff(const StateVector& a, const StateVector& b) {
  double d = 0.0;
  for (Index i = 0; i < a.dim(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

StateVector random_state(int n, std::uint64_t seed) {
  auto rng = make_rng(seed);
  std::normal_distribution<double> g;
  StateVector s(n);
  double norm = 0.0;
  for (Index i = 0; i < s.dim(); ++i) {
    s[i] = Complex(g(rng), g(rng));
    norm += std::norm(s[i]);
  }
  for (Index i = 0; i < s.dim(); ++i) s[i] /= std::sqrt(norm);
  return s;
}

// Operator on n qubits built from single-qubit matrices by Kronecker products.
// Qubit 0 is the least significant bit, so it is the rightmost factor.
Eigen::MatrixXcd kron_chain(int n, const std::map<int, Eigen::Matrix2cd>& ops) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int q = n - 1; q >= 0; --q) {
    Eigen::Matrix2cd m = ops.count(q) ? ops.at(q) : Eigen::Matrix2cd::Identity();
    Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
    for (int r = 0; r < out.rows(); ++r) {
      for (int c = 0; c < out.cols(); ++c) next.block(2 * r, 2 * c, 2, 2) = out(r, c) * m;
    }
    out = next;
  }
  return out;
}

Eigen::MatrixXcd dense_xy_ring(int n, const std::vector<int>& ring) {
  Eigen::Matrix2cd X, Y;
  X << 0, 1, 1, 0;
  Y << 0, Complex(0, -1), Complex(0, 1), 0;
  const int m = static_cast<int>(ring.size());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(1 << n, 1 << n);
  const int edges = m == 2 ? 1 : m;
  for (int k = 0; k < edges; ++k) {
    const int a = ring[k], b = ring[(k + 1) % m];
    h += 0.5 * (kron_chain(n, {{a, X}, {b, X}}) + kron_chain(n, {{a, Y}, {b, Y}}));
  }
  return h;
}

Eigen::MatrixXcd expm_hermitian(const Eigen::MatrixXcd& h, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  Eigen::VectorXcd ph(h.rows());
  for (int k = 0; k < h.rows(); ++k) ph(k) = std::polar(1.0, -t * es.eigenvalues()(k));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

StateVector apply_dense(const StateVector& s, const Eigen::MatrixXcd& u) {
  Eigen::VectorXcd v(s.dim());
  for (Index i = 0; i < s.dim(); ++i) v(i) = s[i];
  Eigen::VectorXcd w = u * v;
  StateVector out(s.n());
  for (Index i = 0; i < s.dim(); ++i) out[i] = w(i);
  return out;
}

}  // namespace

TEST_CASE("uniform and Dicke states") {
  auto u1 = uniform_state(1);
  CHECK(u1[0].real() == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(u1[1].real() == doctest::Approx(1 / std::sqrt(2.0)));
  auto u5 = uniform_state(5);
  for (Index i = 0; i < 32; ++i) CHECK(u5[i].real() == doctest::Approx(1 / std::sqrt(32.0)));

  auto d42 = dicke_state(4, 2);
  int support = 0;
  for (Index i = 0; i < 16; ++i) {
    if (std::abs(d42[i]) > 0) {
      ++support;
      CHECK(popcount(i) == 2);
      CHECK(d42[i].real() == doctest::Approx(0.40825).epsilon(1e-5));
    }
  }
  CHECK(support == 6);
  auto d30 = dicke_state(3, 0);
  CHECK(d30[0] == Complex(1, 0));
  CHECK(d30.norm_squared() == doctest::Approx(1.0));
  CHECK_THROWS_AS(dicke_state(3, 4), InputError);
  CHECK_THROWS_AS(uniform_state(25), CapacityError);

  auto a = preset_problem('A', 10.0);
  auto d54 = dicke_state(5, 4);
  double p_feas = 0.0;
  for (Index i = 0; i < 32; ++i) {
    if (is_feasible(a.encoding, i)) p_feas += std::norm(d54[i]);
  }
  CHECK(p_feas == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("block product states") {
  auto b = preset_problem('B');
  std::vector<Block> blocks;
  for (const auto& t : b.encoding.hamming_targets) blocks.push_back({t.qubits, t.weight, std::nullopt});
  auto s = block_product_state(16, blocks);
  int support = 0;
  for (Index i = 0; i < s.dim(); ++i) {
    if (std::abs(s[i]) > 0) {
      ++support;
      CHECK(satisfies_hamming_targets(b.encoding, i));
    }
  }
  CHECK(support == 1120);
  CHECK(s.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));

  auto pure = block_product_state(3, {{{0, 1, 2}, std::nullopt, std::string("101")}});
  CHECK(max_diff(pure, basis_state(3, from_bitstring("101"))) == 0.0);

  auto mixed = block_product_state(3, {{{1}, std::nullopt, std::string("1")}, {{0, 2}, 1, std::nullopt}});
  CHECK(std::abs(mixed[from_bitstring("110")]) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(std::abs(mixed[from_bitstring("011")]) == doctest::Approx(1 / std::sqrt(2.0)));

  CHECK_THROWS_AS(block_product_state(3, {{{0, 1}, 1, std::nullopt}, {{1, 2}, 1, std::nullopt}}), InputError);
  CHECK_THROWS_AS(block_product_state(3, {{{0, 1}, 1, std::nullopt}}), InputError);
}

TEST_CASE("phase separator") {
  auto s = random_state(3, 1);
  auto t = s;
  QuboModel q(3);
  q.add_linear(0, 1.5);
  q.add_quadratic(1, 2, -2.0);
  apply_phase_separator(t, q, 0.0);
  CHECK(max_diff(s, t) == 0.0);
  apply_phase_separator(t, q, 0.37);
  for (Index i = 0; i < 8; ++i) CHECK(std::abs(t[i]) == doctest::Approx(std::abs(s[i])).epsilon(1e-14));
  apply_phase_separator(t, q, -0.37);
  CHECK(max_diff(s, t) < 1e-12);

  const double w = 0.8, g = 0.3;
  IsingModel zz(2);
  zz.add_coupling(0, 1, w);
  auto u = uniform_state(2);
  apply_phase_separator(u, zz, g);
  const Complex minus = std::polar(0.5, -g * w), plus = std::polar(0.5, g * w);
  CHECK(std::abs(u[0] - minus) < 1e-14);
  CHECK(std::abs(u[1] - plus) < 1e-14);
  CHECK(std::abs(u[2] - plus) < 1e-14);
  CHECK(std::abs(u[3] - minus) < 1e-14);

  CHECK_THROWS_AS(apply_phase_separator(t, QuboModel(2), 0.1), InputError);
}

TEST_CASE("X mixer") {
  auto s = random_state(3, 2);
  auto t = s;
  apply_x_mixer(t, 0.0);
  CHECK(max_diff(s, t) == 0.0);

  auto u = uniform_state(4);
  apply_x_mixer(u, 0.7);
  const Complex phase = u[0] / std::abs(u[0]);
  for (Index i = 0; i < 16; ++i) CHECK(std::abs(u[i] - phase * 0.25) < 1e-14);

  auto z = StateVector(1);
  apply_x_mixer(z, kPi / 2);
  CHECK(std::abs(z[0]) < 1e-15);
  CHECK(std::abs(z[1] - Complex(0, -1)) < 1e-15);

  Eigen::Matrix2cd X;
  X << 0, 1, 1, 0;
  auto r = random_state(3, 3);
  auto expect = apply_dense(r, expm_hermitian(kron_chain(3, {{0, X}}) + kron_chain(3, {{1, X}}) + kron_chain(3, {{2, X}}), 0.4));
  apply_x_mixer(r, 0.4);
  CHECK(max_diff(r, expect) < 1e-12);
}

TEST_CASE("XY ring mixer") {
  const double beta = 0.61;
  auto s = basis_state(2, from_bitstring("01"));
  apply_xy_ring_mixer(s, {0, 1}, beta);
  CHECK(std::norm(s[from_bitstring("01")]) == doctest::Approx(std::cos(beta) * std::cos(beta)));
  CHECK(std::norm(s[from_bitstring("10")]) == doctest::Approx(std::sin(beta) * std::sin(beta)));
  CHECK(std::abs(s[from_bitstring("10")] - Complex(0, -std::sin(beta))) < 1e-14);

  auto p1 = basis_state(2, 1), p2 = basis_state(2, 1);
  apply_xy_ring_mixer(p1, {0, 1}, beta);
  apply_xy_ring_mixer(p2, {0, 1}, beta + kPi);
  for (Index i = 0; i < 4; ++i) CHECK(std::norm(p1[i]) == doctest::Approx(std::norm(p2[i])).epsilon(1e-12));

  auto d = dicke_state(4, 2);
  auto d0 = d;
  apply_xy_ring_mixer(d0, {0, 1, 2, 3}, 0.0);
  CHECK(max_diff(d, d0) < 1e-14);
  for (double b : {0.3, 1.1, 2.9}) {
    auto x = random_state(4, 7);
    for (Index i = 0; i < 16; ++i) {
      if (popcount(i) != 2) x[i] = 0.0;
    }
    apply_xy_ring_mixer(x, {0, 1, 2, 3}, b);
    for (Index i = 0; i < 16; ++i) {
      if (popcount(i) != 2) CHECK(x[i] == Complex(0.0, 0.0));
    }
  }

  for (const std::vector<int>& ring : {std::vector<int>{0, 1}, std::vector<int>{2, 0, 3},
                                       std::vector<int>{4, 1, 3, 0}, std::vector<int>{0, 1, 2, 3, 4}}) {
    auto r = random_state(5, 11);
    auto expect = apply_dense(r, expm_hermitian(dense_xy_ring(5, ring), 0.83));
    apply_xy_ring_mixer(r, ring, 0.83);
    CHECK(max_diff(r, expect) < 1e-12);
    CHECK(r.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
  }

  StateVector big(13);
  std::vector<int> ring13(13);
  for (int i = 0; i < 13; ++i) ring13[i] = i;
  CHECK_THROWS_AS(apply_xy_ring_mixer(big, ring13, 0.1), CapacityError);
}

TEST_CASE("local unitary and gates") {
  auto s = random_state(3, 4);
  auto t = s;
  apply_local_unitary(t, {0, 2}, Eigen::MatrixXcd::Identity(4, 4));
  CHECK(max_diff(s, t) == 0.0);

  Eigen::MatrixXcd X(2, 2);
  X << 0, 1, 1, 0;
  auto z = basis_state(2, from_bitstring("00"));
  apply_local_unitary(z, {0}, X);
  CHECK(z[from_bitstring("10")] == Complex(1, 0));

  Eigen::MatrixXcd nonunitary(2, 2);
  nonunitary << 1, 1, 0, 1;
  CHECK_THROWS_AS(apply_local_unitary(z, {0}, nonunitary), InputError);

  Eigen::MatrixXcd h(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  Eigen::MatrixXcd ry = Eigen::MatrixXcd::Zero(2, 2);
  ry << std::cos(0.2), -std::sin(0.2), std::sin(0.2), std::cos(0.2);
  auto a = random_state(3, 5), b = a;
  apply_local_unitary(a, {0}, h);
  apply_local_unitary(a, {2}, ry);
  apply_local_unitary(b, {2}, ry);
  apply_local_unitary(b, {0}, h);
  CHECK(max_diff(a, b) < 1e-12);

  auto r = random_state(2, 6), r0 = r;
  apply_ry(r, 1, 0.0);
  CHECK(max_diff(r, r0) == 0.0);
  auto one = StateVector(1);
  apply_ry(one, 0, kPi);
  CHECK(std::abs(one[1] - Complex(1, 0)) < 1e-15);
  auto c = basis_state(2, from_bitstring("10"));
  apply_cnot(c, 0, 1);
  CHECK(c[from_bitstring("11")] == Complex(1, 0));
  CHECK_THROWS_AS(apply_cnot(c, 1, 1), InputError);

  auto g = random_state(3, 8), g2 = g;
  apply_ry(g, 1, 0.9);
  Eigen::MatrixXcd ryd(2, 2);
  ryd << std::cos(0.45), -std::sin(0.45), std::sin(0.45), std::cos(0.45);
  apply_local_unitary(g2, {1}, ryd);
  CHECK(max_diff(g, g2) < 1e-14);
}

TEST_CASE("expectation") {
  auto a = preset_problem('A', 10.0);
  auto table = energy_table(a.model);
  double mean = 0.0;
  for (double e : table) mean += e / 32.0;
  CHECK(expectation(uniform_state(5), a.model) == doctest::Approx(mean).epsilon(1e-12));
  CHECK(expectation(basis_state(5, from_bitstring("11011")), a.model) == -200);
  auto r = random_state(5, 9);
  const double ev = expectation(r, a.model);
  CHECK(ev >= *std::min_element(table.begin(), table.end()));
  CHECK(ev <= *std::max_element(table.begin(), table.end()));
  CHECK(expectation(r, qubo_to_ising(a.model)) == doctest::Approx(ev).epsilon(1e-12));
}

TEST_CASE("sampling") {
  auto b = basis_state(3, from_bitstring("011"));
  auto s = sample(b, 100, 1);
  CHECK(s.counts.size() == 1);
  CHECK(s.count("011") == 100);

  auto u = uniform_state(2);
  auto big = sample(u, 100000, 42);
  const double sigma = std::sqrt(0.25 * 0.75 / 100000);
  std::int64_t total = 0;
  for (auto [x, c] : big.counts) {
    CHECK(std::abs(c / 100000.0 - 0.25) < 5 * sigma);
    total += c;
  }
  CHECK(total == 100000);
  auto again = sample(u, 100000, 42);
  CHECK(again.counts == big.counts);
  CHECK_THROWS_AS(sample(u, 0, 1), InputError);
}

TEST_CASE("norm preservation across operations") {
  auto s = random_state(6, 10);
  apply_x_mixer(s, 0.3);
  apply_xy_ring_mixer(s, {0, 2, 4}, 1.2);
  apply_ry(s, 3, 0.5);
  apply_cnot(s, 2, 5);
  CHECK(std::abs(s.norm_squared() - 1.0) < 1e-10);
}
