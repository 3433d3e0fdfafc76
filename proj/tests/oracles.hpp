#pragma once

// Reference computations used only by the tests. They avoid the library's own
// code paths: binomials come from exact integer Pascal rows, ranks from a
// naive row reduction over int64.

#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

// C(m, q) mod p from Pascal's triangle built mod p.
inline std::uint32_t binomial(std::uint64_t m, std::uint64_t q, std::uint32_t p) {
  if (q > m) return 0;
  std::vector<std::uint32_t> row{1};
  for (std::uint64_t i = 1; i <= m; ++i) {
    std::vector<std::uint32_t> next(i + 1, 1);
    for (std::uint64_t j = 1; j < i; ++j) next[j] = (row[j - 1] + row[j]) % p;
    row = std::move(next);
  }
  return row[q] % p;
}

// Generalized C(m, q) = m (m-1) ... (m-q+1) / q!, computed with the
// falling factorial and a modular inverse of q! when q < p, otherwise by
// expanding C(m, q) through Vandermonde on a nonnegative shift of m.
inline std::uint32_t signed_binomial(std::int64_t m, std::uint64_t q, std::uint32_t p) {
  if (m >= 0) return binomial(static_cast<std::uint64_t>(m), q, p);
  // C(m, q) is a polynomial in m of degree q, so it is periodic in m with
  // period p^k once p^k > q. Shift m up by a multiple of that period.
  std::int64_t period = 1;
  while (period <= static_cast<std::int64_t>(q)) period *= p;
  std::int64_t shifted = m % period;
  if (shifted < 0) shifted += period;
  return binomial(static_cast<std::uint64_t>(shifted), q, p);
}

inline std::size_t rank(std::vector<std::vector<std::int64_t>> a, std::uint32_t p) {
  const std::int64_t P = p;
  std::size_t r = 0;
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && ((a[piv][c] % P) + P) % P == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    std::int64_t inv = 1;
    std::int64_t x = ((a[r][c] % P) + P) % P;
    for (std::int64_t k = 1; k < P; ++k)
      if ((x * k) % P == 1) inv = k;
    for (auto& v : a[r]) v = ((v * inv) % P + P) % P;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r) continue;
      std::int64_t fct = ((a[i][c] % P) + P) % P;
      if (fct == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) a[i][j] = ((a[i][j] - fct * a[r][j]) % P + P) % P;
    }
    ++r;
  }
  return r;
}

}  // namespace oracle
