#pragma once

#include "tropchow/integer.hpp"

#include <algorithm>
#include <cassert>
#include <initializer_list>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace tropchow {

/// Dense row-major matrix of arbitrary-precision integers.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<Integer>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw Error("IntMatrix: ragged initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  /// Matrix whose rows are the given vectors; `cols` is used when `rows` is
  /// empty.
  static IntMatrix from_rows(const std::vector<IntVector>& rows,
                             std::size_t cols) {
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw Error("IntMatrix: row length mismatch");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static IntMatrix from_columns(const std::vector<IntVector>& columns,
                                std::size_t rows) {
    return from_rows(columns, rows).transpose();
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Integer& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  const Integer& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  IntVector row(std::size_t i) const {
    return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                     data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }
  IntVector column(std::size_t j) const {
    IntVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](const Integer& x) { return x == 0; });
  }

  // Elementary operations, used by the normal-form algorithms.
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  /// row[dst] += factor * row[src]
  void add_row(std::size_t dst, std::size_t src, const Integer& factor) {
    if (factor == 0) return;
    for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += factor * (*this)(src, j);
  }
  /// col[dst] += factor * col[src]
  void add_col(std::size_t dst, std::size_t src, const Integer& factor) {
    if (factor == 0) return;
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += factor * (*this)(i, src);
  }
  void negate_row(std::size_t r) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = -(*this)(r, j);
  }
  void negate_col(std::size_t c) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, c) = -(*this)(i, c);
  }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw Error("IntMatrix: shape mismatch in product");
    IntMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Integer& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend IntVector operator*(const IntMatrix& a, const IntVector& x) {
    if (a.cols_ != x.size()) throw Error("IntMatrix: shape mismatch in product");
    IntVector y(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) y[i] += a(i, j) * x[j];
    return y;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  IntVector data_;
};

/// Exact determinant by fraction-free (Bareiss) elimination.
inline Integer determinant(IntMatrix a) {
  if (a.rows() != a.cols()) throw Error("determinant: matrix is not square");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      a.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

struct HermiteDecomposition {
  IntMatrix H;  ///< row-style Hermite normal form
  IntMatrix U;  ///< unimodular, H = U * A
  std::size_t rank = 0;
};

/// Row-style Hermite normal form: echelon, positive pivots, entries above
/// each pivot reduced into [0, pivot). Zero rows are last. Pivot choice is
/// the smallest absolute value, lowest row index on ties.
inline HermiteDecomposition hermite_normal_form(const IntMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  HermiteDecomposition out{a, IntMatrix::identity(m), 0};
  IntMatrix& h = out.H;
  IntMatrix& u = out.U;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    bool has_pivot = false;
    for (;;) {
      std::optional<std::size_t> best;
      for (std::size_t i = r; i < m; ++i) {
        if (h(i, c) == 0) continue;
        if (!best || abs(h(i, c)) < abs(h(*best, c))) best = i;
      }
      if (!best) break;
      has_pivot = true;
      h.swap_rows(r, *best);
      u.swap_rows(r, *best);
      bool clean = true;
      for (std::size_t i = r + 1; i < m; ++i) {
        if (h(i, c) == 0) continue;
        const Integer q = h(i, c) / h(r, c);
        h.add_row(i, r, -q);
        u.add_row(i, r, -q);
        if (h(i, c) != 0) clean = false;
      }
      if (clean) break;
    }
    if (!has_pivot) continue;
    if (h(r, c) < 0) {
      h.negate_row(r);
      u.negate_row(r);
    }
    for (std::size_t i = 0; i < r; ++i) {
      const Integer q = floor_div(h(i, c), h(r, c));
      h.add_row(i, r, -q);
      u.add_row(i, r, -q);
    }
    ++r;
  }
  out.rank = r;
  return out;
}

struct SmithDecomposition {
  IntMatrix U;  ///< unimodular, U * A * V = D
  IntMatrix D;  ///< diagonal, d_1 | d_2 | ..., nonnegative
  IntMatrix V;  ///< unimodular
  IntMatrix U_inverse;
  IntMatrix V_inverse;
  std::size_t rank = 0;

  /// Nonzero diagonal entries d_1, ..., d_rank.
  IntVector invariant_factors() const {
    IntVector f;
    for (std::size_t i = 0; i < rank; ++i) f.push_back(D(i, i));
    return f;
  }
  /// Invariant factors larger than one: the torsion of the cokernel of the
  /// row space.
  IntVector torsion() const {
    IntVector t;
    for (std::size_t i = 0; i < rank; ++i)
      if (D(i, i) > 1) t.push_back(D(i, i));
    return t;
  }
};

inline SmithDecomposition smith_normal_form(const IntMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  SmithDecomposition s{IntMatrix::identity(m), a, IntMatrix::identity(n),
                       IntMatrix::identity(m), IntMatrix::identity(n), 0};
  IntMatrix& d = s.D;

  // Each helper keeps U * A * V = D and the two inverses in sync.
  auto row_add = [&](std::size_t dst, std::size_t src, const Integer& f) {
    d.add_row(dst, src, f);
    s.U.add_row(dst, src, f);
    s.U_inverse.add_col(src, dst, -f);
  };
  auto col_add = [&](std::size_t dst, std::size_t src, const Integer& f) {
    d.add_col(dst, src, f);
    s.V.add_col(dst, src, f);
    s.V_inverse.add_row(src, dst, -f);
  };
  auto row_swap = [&](std::size_t a_, std::size_t b_) {
    d.swap_rows(a_, b_);
    s.U.swap_rows(a_, b_);
    s.U_inverse.swap_cols(a_, b_);
  };
  auto col_swap = [&](std::size_t a_, std::size_t b_) {
    d.swap_cols(a_, b_);
    s.V.swap_cols(a_, b_);
    s.V_inverse.swap_rows(a_, b_);
  };

  const std::size_t limit = std::min(m, n);
  std::size_t t = 0;
  for (; t < limit; ++t) {
    bool found = false;
    for (;;) {
      // Smallest nonzero entry of the trailing block; ties by row then column.
      std::optional<std::pair<std::size_t, std::size_t>> best;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j) {
          if (d(i, j) == 0) continue;
          if (!best || abs(d(i, j)) < abs(d(best->first, best->second)))
            best = {i, j};
        }
      if (!best) break;
      found = true;
      row_swap(t, best->first);
      col_swap(t, best->second);

      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (d(i, t) == 0) continue;
        row_add(i, t, -(d(i, t) / d(t, t)));
        if (d(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (d(t, j) == 0) continue;
        col_add(j, t, -(d(t, j) / d(t, t)));
        if (d(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      std::optional<std::size_t> offending;
      for (std::size_t i = t + 1; i < m && !offending; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (d(i, j) % d(t, t) != 0) {
            offending = i;
            break;
          }
      if (!offending) break;
      row_add(t, *offending, 1);
    }
    if (!found) break;
    if (d(t, t) < 0) {
      d.negate_row(t);
      s.U.negate_row(t);
      s.U_inverse.negate_col(t);
    }
  }
  s.rank = t;
  return s;
}

/// Columns form a saturated Z-basis of {x : A x = 0}, in Hermite normal form
/// (as rows), so the basis is canonical.
inline IntMatrix integer_kernel(const IntMatrix& a) {
  const std::size_t n = a.cols();
  const HermiteDecomposition h = hermite_normal_form(a.transpose());
  std::vector<IntVector> basis;
  for (std::size_t i = h.rank; i < n; ++i) basis.push_back(h.U.row(i));
  if (basis.empty()) return IntMatrix(n, 0);
  const IntMatrix canonical =
      hermite_normal_form(IntMatrix::from_rows(basis, n)).H;
  return canonical.transpose();
}

/// Some integer x with A x = b, or nullopt. Free coordinates are set to zero
/// in the Smith frame, so the answer is deterministic.
inline std::optional<IntVector> solve_integer_system(const IntMatrix& a,
                                                     const IntVector& b) {
  if (b.size() != a.rows()) throw Error("solve_integer_system: shape mismatch");
  const SmithDecomposition s = smith_normal_form(a);
  const IntVector ub = s.U * b;
  IntVector y(a.cols());
  for (std::size_t i = 0; i < ub.size(); ++i) {
    if (i < s.rank) {
      if (ub[i] % s.D(i, i) != 0) return std::nullopt;
      y[i] = ub[i] / s.D(i, i);
    } else if (ub[i] != 0) {
      return std::nullopt;
    }
  }
  return s.V * y;
}

class NoSolution : public Error {
 public:
  using Error::Error;
};

/// A covector m with <m, vectors[i]> = values[i] for all i.
inline IntVector solve_prescribed_pairings(const std::vector<IntVector>& vectors,
                                           const IntVector& values,
                                           std::size_t ambient_rank) {
  if (vectors.size() != values.size())
    throw Error("solve_prescribed_pairings: one value per vector required");
  auto m = solve_integer_system(IntMatrix::from_rows(vectors, ambient_rank),
                                values);
  if (!m) throw NoSolution("prescribed pairings have no integral solution");
  return *m;
}

/// The quotient map N -> N / (saturation of a sublattice), in coordinates.
struct LatticeProjection {
  std::size_t source_rank = 0;
  std::size_t target_rank = 0;
  IntMatrix matrix;  ///< target_rank x source_rank

  IntVector apply(const IntVector& v) const { return matrix * v; }
};

inline LatticeProjection quotient_lattice(const std::vector<IntVector>& generators,
                                          std::size_t ambient_rank) {
  const IntMatrix g = IntMatrix::from_rows(generators, ambient_rank);
  const IntMatrix k = integer_kernel(g);
  return LatticeProjection{ambient_rank, k.cols(), k.transpose()};
}

/// Coordinates of p in terms of linearly independent columns, or nullopt when
/// p is outside their span. Exact rational elimination.
inline std::optional<RatVector> solve_in_span(const std::vector<IntVector>& columns,
                                              const RatVector& p) {
  const std::size_t n = p.size();
  const std::size_t k = columns.size();
  // Augmented n x (k+1) system.
  std::vector<RatVector> a(n, RatVector(k + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) a[i][j] = columns[j][i];
    a[i][k] = p[i];
  }
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < k && r < n; ++c) {
    std::size_t piv = r;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) continue;
    std::swap(a[r], a[piv]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Rational f = a[i][c] / a[r][c];
      for (std::size_t j = c; j <= k; ++j) a[i][j] -= f * a[r][j];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < n; ++i)
    if (a[i][k] != 0) return std::nullopt;
  if (r != k) throw Error("solve_in_span: columns are linearly dependent");
  RatVector x(k);
  for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = a[i][k] / a[i][pivot_col[i]];
  return x;
}

}  // namespace tropchow
