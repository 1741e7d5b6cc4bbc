#pragma once

// Independent reference implementations used only by the tests. They share
// the Integer type with the library and nothing else.

#include "tropchow/integer.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using tropchow::Integer;
using Grid = std::vector<std::vector<Integer>>;

/// Seeded generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  long uniform(long lo, long hi) {
    return lo + static_cast<long>(rng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  bool coin() { return (rng_() & 1U) != 0; }
  std::uint64_t next() { return rng_(); }

  Grid matrix(std::size_t rows, std::size_t cols, long lo, long hi) {
    Grid g(rows, std::vector<Integer>(cols));
    for (auto& row : g)
      for (auto& x : row) x = uniform(lo, hi);
    return g;
  }

 private:
  std::mt19937_64 rng_;
};

/// Cofactor expansion; fine for the tiny minors used here.
inline Integer det_cofactor(const Grid& a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  if (n == 1) return a[0][0];
  if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
  Integer s = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (a[0][j] == 0) continue;
    Grid minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<Integer> row;
      for (std::size_t c = 0; c < n; ++c)
        if (c != j) row.push_back(a[i][c]);
      minor.push_back(std::move(row));
    }
    const Integer term = a[0][j] * det_cofactor(minor);
    s += (j % 2 == 0) ? term : Integer(-term);
  }
  return s;
}

inline void for_each_subset(std::size_t n, std::size_t k,
                            const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  if (k > n) return;
  for (;;) {
    fn(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Invariant factors from determinantal divisors: d_k = gcd of k x k minors.
inline std::vector<Integer> invariant_factors(const Grid& a) {
  const std::size_t m = a.size();
  const std::size_t n = m == 0 ? 0 : a[0].size();
  std::vector<Integer> out;
  Integer previous = 1;
  for (std::size_t k = 1; k <= std::min(m, n); ++k) {
    Integer g = 0;
    for_each_subset(m, k, [&](const std::vector<std::size_t>& rows) {
      for_each_subset(n, k, [&](const std::vector<std::size_t>& cols) {
        Grid minor(k, std::vector<Integer>(k));
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) minor[i][j] = a[rows[i]][cols[j]];
        g = tropchow::gcd(g, det_cofactor(minor));
      });
    });
    if (g == 0) break;
    out.push_back(g / previous);
    previous = g;
  }
  return out;
}

/// Rank by fraction-free (Bareiss) elimination.
inline std::size_t rank_bareiss(Grid a) {
  const std::size_t m = a.size();
  const std::size_t n = m == 0 ? 0 : a[0].size();
  std::size_t r = 0;
  Integer prev = 1;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t p = r;
    while (p < m && a[p][c] == 0) ++p;
    if (p == m) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = r + 1; i < m; ++i) {
      for (std::size_t j = c + 1; j < n; ++j) a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev;
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  return r;
}

/// Row Hermite form by plain Euclid on pairs of rows, top pivot row kept.
inline Grid hermite_naive(Grid a) {
  const std::size_t m = a.size();
  const std::size_t n = m == 0 ? 0 : a[0].size();
  auto axpy = [&](std::size_t dst, std::size_t src, const Integer& f) {
    for (std::size_t j = 0; j < n; ++j) a[dst][j] += f * a[src][j];
  };
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    for (std::size_t i = r + 1; i < m; ++i) {
      while (a[i][c] != 0) {
        if (a[r][c] == 0) {
          std::swap(a[r], a[i]);
          continue;
        }
        const Integer q = a[i][c] / a[r][c];
        axpy(i, r, -q);
        if (a[i][c] != 0) std::swap(a[r], a[i]);
      }
    }
    if (a[r][c] == 0) continue;
    if (a[r][c] < 0)
      for (auto& x : a[r]) x = -x;
    for (std::size_t i = 0; i < r; ++i) {
      Integer q = a[i][c] / a[r][c];
      if (a[i][c] - q * a[r][c] < 0) q -= 1;
      axpy(i, r, -q);
    }
    ++r;
  }
  return a;
}

/// Descent counts over permutations of n letters (Eulerian numbers).
inline std::vector<int> eulerian(int n) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> counts(static_cast<std::size_t>(std::max(n, 1)), 0);
  do {
    int descents = 0;
    for (int i = 0; i + 1 < n; ++i)
      if (perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(i + 1)]) ++descents;
    ++counts[static_cast<std::size_t>(descents)];
  } while (std::next_permutation(perm.begin(), perm.end()));
  return counts;
}

}  // namespace oracle
