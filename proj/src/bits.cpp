#include "qlocate/bits.hpp"

#include <cmath>

#include "qlocate/error.hpp"

namespace qlocate {

std::string to_bitstring(Index x, int n) {
  std::string s(static_cast<size_t>(n), '0');
  for (int i = 0; i < n; ++i) {
    if (bit(x, i)) s[static_cast<size_t>(i)] = '1';
  }
  return s;
}

Index from_bitstring(const std::string& s) {
  if (s.size() > 64) throw InputError("bitstring longer than 64 characters");
  Index x = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1') {
      x |= Index{1} << i;
    } else if (s[i] != '0') {
      throw InputError("bitstring contains a character other than 0/1: " + s);
    }
  }
  return x;
}

Index from_bitstring(const std::string& s, int n) {
  if (static_cast<int>(s.size()) != n) {
    throw InputError("bitstring length " + std::to_string(s.size()) + " does not match " +
                     std::to_string(n) + " variables");
  }
  return from_bitstring(s);
}

std::vector<int> to_spins(Index x, int n) {
  std::vector<int> z(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) z[static_cast<size_t>(i)] = 1 - 2 * bit(x, i);
  return z;
}

Index from_spins(const std::vector<int>& z) {
  Index x = 0;
  for (size_t i = 0; i < z.size(); ++i) {
    if (z[i] == -1) {
      x |= Index{1} << i;
    } else if (z[i] != 1) {
      throw InputError("spin values must be -1 or +1");
    }
  }
  return x;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

std::vector<std::vector<int>> combinations(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> c(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) c[static_cast<size_t>(i)] = i;
  while (true) {
    out.push_back(c);
    int i = k - 1;
    while (i >= 0 && c[static_cast<size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++c[static_cast<size_t>(i)];
    for (int j = i + 1; j < k; ++j) c[static_cast<size_t>(j)] = c[static_cast<size_t>(j - 1)] + 1;
  }
  return out;
}

}  // namespace qlocate
