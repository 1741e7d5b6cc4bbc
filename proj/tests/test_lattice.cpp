#include "oracles.hpp"
#include "tropchow/lattice.hpp"

#include <gtest/gtest.h>

using namespace tropchow;

namespace {

IntMatrix to_matrix(const oracle::Grid& g) {
  const std::size_t cols = g.empty() ? 0 : g[0].size();
  return IntMatrix::from_rows(g, cols);
}

oracle::Grid to_grid(const IntMatrix& m) {
  oracle::Grid g;
  for (std::size_t i = 0; i < m.rows(); ++i) g.push_back(m.row(i));
  return g;
}

IntMatrix m22(long a, long b, long c, long d) {
  IntMatrix m(2, 2);
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = c;
  m(1, 1) = d;
  return m;
}

}  // namespace

TEST(Hermite, IdentityIsFixed) {
  const auto h = hermite_normal_form(IntMatrix::identity(2));
  EXPECT_EQ(h.H, IntMatrix::identity(2));
  EXPECT_EQ(h.U, IntMatrix::identity(2));
}

TEST(Hermite, TwoByTwoFullyReduced) {
  const auto a = m22(2, 4, 6, 8);
  const auto h = hermite_normal_form(a);
  // Above-pivot entries live in [0, pivot), so the 4 above the pivot 4 is
  // cleared.
  EXPECT_EQ(h.H, m22(2, 0, 0, 4));
  EXPECT_EQ(h.U * a, h.H);
  EXPECT_EQ(abs(determinant(h.U)), 1);
  EXPECT_EQ(to_matrix(oracle::hermite_naive(to_grid(a))), h.H);
}

TEST(Hermite, ZeroMatrix) {
  const IntMatrix z(3, 2);
  const auto h = hermite_normal_form(z);
  EXPECT_EQ(h.H, z);
  EXPECT_EQ(h.rank, 0u);
}

TEST(Smith, DiagonalTwoThree) {
  const auto s = smith_normal_form(m22(2, 0, 0, 3));
  EXPECT_EQ(s.D, m22(1, 0, 0, 6));
}

TEST(Smith, Identity) {
  EXPECT_EQ(smith_normal_form(IntMatrix::identity(4)).D, IntMatrix::identity(4));
}

TEST(Smith, TwoByTwo) {
  const auto a = m22(2, 4, 6, 8);
  const auto s = smith_normal_form(a);
  EXPECT_EQ(s.D, m22(2, 0, 0, 4));
  EXPECT_EQ(s.U * a * s.V, s.D);
}

TEST(Smith, RandomAgainstDeterminantalDivisors) {
  oracle::Gen gen(1001);
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t r = 1 + gen.index(6);
    const std::size_t c = 1 + gen.index(6);
    const auto g = gen.matrix(r, c, -9, 9);
    const IntMatrix a = to_matrix(g);
    const auto s = smith_normal_form(a);
    ASSERT_EQ(s.U * a * s.V, s.D);
    ASSERT_EQ(abs(determinant(s.U)), 1);
    ASSERT_EQ(abs(determinant(s.V)), 1);
    ASSERT_EQ(s.U * s.U_inverse, IntMatrix::identity(r));
    ASSERT_EQ(s.V * s.V_inverse, IntMatrix::identity(c));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        if (i != j) ASSERT_EQ(s.D(i, j), 0);
    for (std::size_t i = 0; i + 1 < s.rank; ++i) ASSERT_EQ(s.D(i + 1, i + 1) % s.D(i, i), 0);
    ASSERT_EQ(s.invariant_factors(), oracle::invariant_factors(g));
    ASSERT_EQ(s.rank, oracle::rank_bareiss(g));
  }
}

TEST(Hermite, RandomAgainstNaive) {
  oracle::Gen gen(2002);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t r = 1 + gen.index(6);
    const std::size_t c = 1 + gen.index(6);
    const auto g = gen.matrix(r, c, -9, 9);
    const IntMatrix a = to_matrix(g);
    const auto h = hermite_normal_form(a);
    ASSERT_EQ(h.U * a, h.H);
    ASSERT_EQ(abs(determinant(h.U)), 1);
    ASSERT_EQ(h.H, to_matrix(oracle::hermite_naive(g)));
    ASSERT_EQ(h.rank, oracle::rank_bareiss(g));
  }
}

TEST(Kernel, AllOnesRow) {
  const IntMatrix a = IntMatrix::from_rows({{1, 1, 1}}, 3);
  const IntMatrix k = integer_kernel(a);
  EXPECT_EQ(k.cols(), 2u);
  EXPECT_TRUE((a * k).is_zero());
  EXPECT_EQ(smith_normal_form(k).invariant_factors(), (IntVector{1, 1}));
}

TEST(Kernel, IdentityAndZero) {
  EXPECT_EQ(integer_kernel(IntMatrix::identity(3)).cols(), 0u);
  const IntMatrix k = integer_kernel(IntMatrix(1, 2));
  EXPECT_EQ(k.cols(), 2u);
  EXPECT_EQ(abs(determinant(k)), 1);
}

TEST(Kernel, RandomSaturated) {
  oracle::Gen gen(3003);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t r = 1 + gen.index(5);
    const std::size_t c = 1 + gen.index(6);
    const auto g = gen.matrix(r, c, -9, 9);
    const IntMatrix a = to_matrix(g);
    const IntMatrix k = integer_kernel(a);
    ASSERT_EQ(k.cols(), c - oracle::rank_bareiss(g));
    if (k.cols() == 0) continue;
    ASSERT_TRUE((a * k).is_zero());
    for (const auto& f : smith_normal_form(k).invariant_factors()) ASSERT_EQ(f, 1);
  }
}

TEST(PrescribedPairings, Examples) {
  EXPECT_EQ(solve_prescribed_pairings({{1, 0}, {0, 1}}, {3, -1}, 2), (IntVector{3, -1}));
  const IntVector m = solve_prescribed_pairings({{1, 0}}, {0}, 2);
  EXPECT_EQ(m, (IntVector{0, 0}));
  const IntVector m2 = solve_prescribed_pairings({{1, 1}, {0, 1}}, {1, 0}, 2);
  EXPECT_EQ(dot(m2, IntVector{1, 1}), 1);
  EXPECT_EQ(dot(m2, IntVector{0, 1}), 0);
  EXPECT_THROW(solve_prescribed_pairings({{2, 0}}, {1}, 2), NoSolution);
}

TEST(QuotientLattice, Examples) {
  const auto p = quotient_lattice({{1, 0}}, 2);
  EXPECT_EQ(p.target_rank, 1u);
  EXPECT_EQ(p.apply({5, 7}), (IntVector{7}));
  const auto q = quotient_lattice({{2, 0}}, 2);
  EXPECT_EQ(q.matrix, p.matrix);
  const auto id = quotient_lattice({}, 3);
  EXPECT_EQ(id.target_rank, 3u);
  EXPECT_EQ(abs(determinant(id.matrix)), 1);
}

TEST(Determinant, Bareiss) {
  EXPECT_EQ(determinant(m22(1, 2, 3, 4)), -2);
  oracle::Gen gen(4004);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + gen.index(5);
    const auto g = gen.matrix(n, n, -9, 9);
    ASSERT_EQ(determinant(to_matrix(g)), oracle::det_cofactor(g));
  }
}
