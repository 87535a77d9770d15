#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace qlocate {

using Index = std::uint64_t;

inline int popcount(Index x) { return std::popcount(x); }
inline int bit(Index x, int i) { return static_cast<int>((x >> i) & 1U); }

/// Renders `x` as an n-character string, qubit 0 leftmost.
std::string to_bitstring(Index x, int n);

/// Parses a string of '0'/'1', qubit 0 leftmost. Throws InputError.
Index from_bitstring(const std::string& s);

/// Parses and checks the length against n.
Index from_bitstring(const std::string& s, int n);

/// Spins z_i = 1 - 2 s_i.
std::vector<int> to_spins(Index x, int n);
Index from_spins(const std::vector<int>& z);

/// Binomial coefficient as a double.
double binomial(int n, int k);

/// Every subset of {0..n-1} of size k, as ascending index lists.
std::vector<std::vector<int>> combinations(int n, int k);

}  // namespace qlocate
