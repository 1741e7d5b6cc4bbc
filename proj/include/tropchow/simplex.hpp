#pragma once

#include "tropchow/integer.hpp"

#include <optional>
#include <vector>

namespace tropchow::detail {

/// Exact feasibility of {z >= 0 : A z = b} by phase-one simplex over the
/// rationals with Bland's rule. Returns a feasible z when one exists.
inline std::optional<RatVector> nonnegative_solution(std::vector<RatVector> a,
                                                     RatVector b) {
  const std::size_t m = a.size();
  const std::size_t n = m == 0 ? 0 : a[0].size();
  for (std::size_t i = 0; i < m; ++i) {
    if (b[i] < 0) {
      b[i] = -b[i];
      for (auto& x : a[i]) x = -x;
    }
  }
  // Tableau columns: n original, m artificial, then right-hand side.
  const std::size_t width = n + m + 1;
  std::vector<RatVector> t(m + 1, RatVector(width));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i][j] = a[i][j];
    t[i][n + i] = 1;
    t[i][width - 1] = b[i];
    basis[i] = n + i;
  }
  // Objective row: minimize the sum of artificials, expressed in reduced
  // costs (row m holds -sum of constraint rows on non-artificial columns).
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < width; ++j)
      if (j < n || j == width - 1) t[m][j] -= t[i][j];

  for (;;) {
    std::optional<std::size_t> enter;
    for (std::size_t j = 0; j + 1 < width; ++j)
      if (t[m][j] < 0) {
        enter = j;
        break;
      }
    if (!enter) break;
    std::optional<std::size_t> leave;
    Rational best_ratio;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][*enter] <= 0) continue;
      const Rational ratio = t[i][width - 1] / t[i][*enter];
      if (!leave || ratio < best_ratio ||
          (ratio == best_ratio && basis[i] < basis[*leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (!leave) break;  // unbounded direction; cannot happen in phase one
    const std::size_t r = *leave;
    const Rational piv = t[r][*enter];
    for (auto& x : t[r]) x /= piv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == r || t[i][*enter] == 0) continue;
      const Rational f = t[i][*enter];
      for (std::size_t j = 0; j < width; ++j) t[i][j] -= f * t[r][j];
    }
    basis[r] = *enter;
  }
  if (t[m][width - 1] != 0) return std::nullopt;
  RatVector z(n);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) z[basis[i]] = t[i][width - 1];
  return z;
}

}  // namespace tropchow::detail
