#include "oracles.hpp"
#include "tropchow/catalog.hpp"
#include "tropchow/chow.hpp"

#include <gtest/gtest.h>

using namespace tropchow;

namespace {

RingPtr ring_of(const std::string& name) { return ChowRing::create(*catalog::fan(name)); }

ChowClass random_class(const RingPtr& ring, int k, oracle::Gen& gen, long spread = 3) {
  ChowClass a(ring, k);
  for (auto& c : a.coefficients()) c = gen.uniform(-spread, spread);
  return a;
}

std::vector<std::size_t> ranks(const RingPtr& ring) {
  std::vector<std::size_t> out;
  for (int k = 0; k <= ring->dimension(); ++k) out.push_back(ring->group(k).rank());
  return out;
}

const std::vector<std::string> kFans{"F1", "F3", "U23", "U24", "U34", "B2", "B3", "K4", "B4"};

}  // namespace

TEST(ChowGroup, Examples) {
  const RingPtr f1 = ring_of("F1");
  const auto& g1 = f1->group(1);
  EXPECT_EQ(g1.generator_count(), 3u);
  EXPECT_EQ(g1.relations().rows(), 2u);
  EXPECT_EQ(g1.rank(), 1u);
  EXPECT_TRUE(g1.is_free());

  const RingPtr f3 = ring_of("F3");
  EXPECT_EQ(f3->group(1).rank(), 4u);
  EXPECT_TRUE(f3->group(1).is_free());

  for (const auto& name : kFans) {
    const RingPtr r = ring_of(name);
    EXPECT_EQ(r->group(0).rank(), 1u) << name;
    EXPECT_EQ(r->group(0).relations().rows(), 0u) << name;
    EXPECT_EQ(r->group(r->dimension() + 1).generator_count(), 0u) << name;
  }
}

TEST(ChowGroup, EulerianRanksForBooleanMatroids) {
  for (int n : {2, 3, 4}) {
    const RingPtr r = ChowRing::create(fine_subdivision(catalog::boolean(n)));
    const auto expected = oracle::eulerian(n);
    std::vector<std::size_t> want(expected.begin(), expected.end());
    EXPECT_EQ(ranks(r), want) << n;
  }
}

TEST(ChowGroup, TorsionIsReported) {
  // A smooth fan in Z^1 with a single ray has R^1 = 0; a fan made of two rays
  // spanning an index-2 sublattice in the quotient is not smooth and refused.
  const Fan bad = Fan::from_maximal_cones(2, {{1, 0}, {1, 2}}, {{0, 1}});
  EXPECT_THROW(ChowRing::create(bad), NotSmooth);
  // Two opposite rays plus an extra ray in Z^2: R^1 = Z^3 / <relations>.
  const Fan f = Fan::from_maximal_cones(2, {{1, 0}, {-1, 0}, {1, 2}}, {{0}, {1}, {2}});
  const RingPtr r = ChowRing::create(f);
  // Relations: x0 - x1 + x2 = 0 and 2 x2 = 0, so R^1 = Z + Z/2.
  EXPECT_EQ(r->group(1).rank(), 1u);
  EXPECT_EQ(r->group(1).torsion(), (IntVector{2}));
}

TEST(NormalForm, Examples) {
  const RingPtr f1 = ring_of("F1");
  EXPECT_EQ(normal_form(monomial(f1, {0})), normal_form(monomial(f1, {1})));
  EXPECT_EQ(normal_form(monomial(f1, {2})), normal_form(monomial(f1, {1})));
  const NormalForm zero = normal_form(ChowClass(f1, 1));
  EXPECT_TRUE(std::all_of(zero.free.begin(), zero.free.end(), [](const Integer& x) { return x == 0; }));
  oracle::Gen gen(12);
  for (const auto& name : kFans) {
    const RingPtr r = ring_of(name);
    for (int k = 0; k <= r->dimension(); ++k) {
      const auto& g = r->group(k);
      for (std::size_t row = 0; row < g.relations().rows(); ++row) {
        const ChowClass a = random_class(r, k, gen);
        const ChowClass rel(r, k, g.relations().row(row));
        ASSERT_EQ(normal_form(a), normal_form(a + rel)) << name;
        ASSERT_TRUE(equivalent(a, a + static_cast<Integer>(gen.uniform(-3, 3)) * rel));
      }
    }
  }
}

TEST(ReduceMonomial, Examples) {
  const RingPtr f1 = ring_of("F1");
  EXPECT_TRUE(reduce_monomial(f1, {0, 0}).is_zero_combination());
  const RingPtr f2 = ChowRing::create(catalog::f2());
  const ChowClass x12 = reduce_monomial(f2, {0, 1});
  EXPECT_EQ(x12.coefficient({0, 1}), 1);
  // F3 rays: 0=(1,0) 3=(1,1) 4=(0,-1). With m = (1,0): x0^2 = -x0 x3.
  const RingPtr f3 = ring_of("F3");
  const ChowClass sq = reduce_monomial(f3, {0, 0});
  EXPECT_EQ(sq.coefficient({0, 3}), -1);
  EXPECT_EQ(sq.coefficient({0, 4}), 0);
  for (std::uint64_t seed : {1, 2, 3}) {
    const ChowClass other = reduce_monomial(f3, {0, 0}, {true, seed});
    EXPECT_TRUE(equivalent(sq, other));
  }
  EXPECT_EQ(evaluate(MinkowskiWeight(f3, 2, IntVector(6, 1)), sq), -1);
}

TEST(ReduceMonomial, ChoiceIndependence) {
  oracle::Gen gen(2024);
  for (const auto& name : kFans) {
    const RingPtr r = ring_of(name);
    const Fan& f = r->fan();
    if (f.ray_count() == 0) continue;
    for (int trial = 0; trial < 30; ++trial) {
      const int deg = static_cast<int>(1 + gen.index(static_cast<std::size_t>(r->dimension()) + 1));
      std::vector<RayId> rays;
      // Bias towards repeated rays inside one cone.
      const Cone& c = f.cone(gen.index(f.cones().size()));
      for (int i = 0; i < deg; ++i)
        rays.push_back(c.empty() || gen.coin() ? static_cast<RayId>(gen.index(f.ray_count()))
                                               : c[gen.index(c.size())]);
      const ChowClass a = reduce_monomial(r, rays);
      const ChowClass b = reduce_monomial(r, rays, {true, gen.next() | 1U});
      ASSERT_EQ(normal_form(a), normal_form(b)) << name;
    }
  }
}

TEST(Multiply, Examples) {
  oracle::Gen gen(8);
  const RingPtr f3 = ring_of("F3");
  const ChowClass a = random_class(f3, 1, gen);
  const ChowClass prod = multiply(a, unit(f3));
  EXPECT_EQ(prod.coefficients(), a.coefficients());
  const RingPtr f1 = ring_of("F1");
  EXPECT_TRUE(multiply(monomial(f1, {0}), monomial(f1, {1})).is_zero_combination());
  const ChowClass c = multiply(monomial(f3, {0}), monomial(f3, {3}));
  EXPECT_EQ(c.coefficient({0, 3}), 1);
  EXPECT_THROW(multiply(monomial(f1, {0}), monomial(f3, {0})), FanMismatch);
}

TEST(Multiply, RingAxioms) {
  oracle::Gen gen(99);
  for (const auto& name : kFans) {
    const RingPtr r = ring_of(name);
    const int d = r->dimension();
    for (int trial = 0; trial < 8; ++trial) {
      const int i = static_cast<int>(gen.index(static_cast<std::size_t>(d) + 1));
      const int j = static_cast<int>(gen.index(static_cast<std::size_t>(d - i) + 1));
      const int k = static_cast<int>(gen.index(static_cast<std::size_t>(d - i - j) + 1));
      const ChowClass a = random_class(r, i, gen);
      const ChowClass b = random_class(r, j, gen);
      const ChowClass c = random_class(r, k, gen);
      ASSERT_TRUE(equivalent(multiply(a, b), multiply(b, a))) << name;
      ASSERT_TRUE(equivalent(multiply(multiply(a, b), c), multiply(a, multiply(b, c)))) << name;
      const ChowClass b2 = random_class(r, j, gen);
      ASSERT_TRUE(equivalent(multiply(a, b + b2), multiply(a, b) + multiply(a, b2))) << name;
    }
  }
}

TEST(MinkowskiWeights, Examples) {
  const RingPtr f1 = ring_of("F1");
  const auto b1 = minkowski_weight_basis(f1, 1);
  ASSERT_EQ(b1.size(), 1u);
  EXPECT_EQ(b1[0].weights(), (IntVector{1, 1, 1}));
  const RingPtr f3 = ring_of("F3");
  const auto b3 = minkowski_weight_basis(f3, 2);
  ASSERT_EQ(b3.size(), 1u);
  EXPECT_EQ(b3[0].weights(), IntVector(6, 1));
  EXPECT_TRUE(minkowski_weight_basis(ChowRing::create(catalog::f2()), 1).empty());
}

TEST(MinkowskiWeights, Balancing) {
  const RingPtr line = ChowRing::create(Fan::from_maximal_cones(1, {{1}, {-1}}, {{0}, {1}}));
  EXPECT_TRUE(is_balanced(MinkowskiWeight(line, 1, {1, 1})));
  EXPECT_FALSE(is_balanced(MinkowskiWeight(line, 1, {1, 2})));
  EXPECT_TRUE(is_balanced(MinkowskiWeight(ring_of("F1"), 1, {1, 1, 1})));
}

TEST(MinkowskiWeights, HomDuality) {
  oracle::Gen gen(5);
  for (const auto& name : kFans) {
    const RingPtr r = ring_of(name);
    for (int k = 0; k <= r->dimension(); ++k) {
      const auto basis = minkowski_weight_basis(r, k);
      if (r->group(k).is_free()) {
        EXPECT_EQ(basis.size(), r->group(k).rank()) << name << " " << k;
      }
      for (const auto& w : basis) {
        ASSERT_TRUE(is_balanced(w));
        const ChowClass a = random_class(r, k, gen);
        for (std::size_t row = 0; row < r->group(k).relations().rows(); ++row) {
          const ChowClass rel(r, k, r->group(k).relations().row(row));
          ASSERT_EQ(evaluate(w, a + rel), evaluate(w, a));
        }
      }
    }
  }
}

TEST(Evaluate, Examples) {
  const RingPtr f1 = ring_of("F1");
  EXPECT_EQ(evaluate(MinkowskiWeight(f1, 1, {1, 1, 1}), monomial(f1, {0})), 1);
  const RingPtr f3 = ring_of("F3");
  EXPECT_EQ(evaluate(MinkowskiWeight(f3, 2, IntVector(6, 1)), monomial(f3, {1, 5})), 1);
  EXPECT_THROW(evaluate(MinkowskiWeight(f3, 2, IntVector(6, 1)), monomial(f3, {1})), DegreeMismatch);
}

TEST(PiecewiseLinear, Examples) {
  const RingPtr f1 = ring_of("F1");
  const auto pl = pl_to_class(f1, {1, 0, 0});
  EXPECT_EQ(pl.cls.coefficients(), monomial(f1, {0}).coefficients());
  const auto linear = pl_to_class(f1, {1, 0, -1});
  EXPECT_EQ(normal_form(linear.cls), normal_form(ChowClass(f1, 1)));
  const auto zero = pl_to_class(ring_of("F3"), IntVector(6));
  EXPECT_TRUE(zero.cls.is_zero_combination());
  // The polynomial evaluates to the piecewise linear function.
  EXPECT_EQ(evaluate_at(pl.polynomial, {3, 0}), 3);
  EXPECT_EQ(evaluate_at(pl.polynomial, {-2, -2}), 0);
}

TEST(PiecewiseLinear, GloballyLinearIsZero) {
  oracle::Gen gen(6);
  for (const auto& name : kFans) {
    const RingPtr r = ring_of(name);
    const Fan& f = r->fan();
    for (int trial = 0; trial < 10; ++trial) {
      IntVector m(f.lattice_rank());
      for (auto& x : m) x = gen.uniform(-4, 4);
      IntVector values;
      for (const auto& u : f.rays()) values.push_back(dot(m, u));
      const auto pl = pl_to_class(r, values);
      ASSERT_EQ(normal_form(pl.cls), normal_form(ChowClass(r, pl.cls.degree()))) << name;
    }
  }
}
