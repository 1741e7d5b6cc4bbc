#include "oracles.hpp"
#include "tropchow/batch.hpp"
#include "tropchow/catalog.hpp"
#include "tropchow/io.hpp"

#include <gtest/gtest.h>

using namespace tropchow;

namespace {

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const io::InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Json, MatroidRoundTrip) {
  for (const auto& name : catalog::matroid_names()) {
    const Matroid m = *catalog::matroid(name);
    const io::Json j = io::to_json(m);
    EXPECT_EQ(io::matroid_from_json(io::parse(io::dump(j))), m) << name;
  }
}

TEST(Json, MatroidFromBases) {
  const auto j = io::parse(R"({"n":3,"bases":[[0,1],[0,2],[1,2]]})");
  EXPECT_EQ(io::matroid_from_json(j), catalog::uniform(2, 3));
}

TEST(Json, MatroidRejects) {
  EXPECT_NE(message_of([] { io::matroid_from_json(io::parse(R"({"n":3})")); }).find("exactly one"),
            std::string::npos);
  EXPECT_NE(message_of([] { io::matroid_from_json(io::parse(R"({"n":2,"circuits":[[0,5]]})")); })
                .find("outside"),
            std::string::npos);
  EXPECT_NE(message_of([] { io::matroid_from_json(io::parse(R"({"n":2,"circuits":[[0,0]]})")); })
                .find("repeated"),
            std::string::npos);
}

TEST(Json, FanRoundTrip) {
  std::vector<Fan> fans{catalog::f1(), catalog::f2(), catalog::f3(), catalog::two_rays()};
  for (const auto& name : catalog::matroid_names()) fans.push_back(*catalog::fan(name));
  for (const Fan& f : fans) {
    const std::string text = io::dump(io::to_json(f));
    const Fan g = io::fan_from_json(io::parse(text));
    EXPECT_EQ(g, canonicalize(f));
    EXPECT_EQ(io::dump(io::to_json(g)), text);
  }
}

TEST(Json, FanCanonicalRaysSorted) {
  const Fan f = Fan::from_maximal_cones(2, {{0, 1}, {1, 0}}, {{0, 1}});
  EXPECT_EQ(io::dump(io::to_json(f)), R"({"lattice_rank":2,"rays":[[0,1],[1,0]],"maximal_cones":[[0,1]]})");
}

TEST(Json, FanRejects) {
  EXPECT_NE(message_of([] {
              io::fan_from_json(io::parse(R"({"lattice_rank":2,"rays":[[1,0,0]],"maximal_cones":[]})"));
            }).find("coordinates"),
            std::string::npos);
  EXPECT_NE(message_of([] {
              io::fan_from_json(io::parse(R"({"lattice_rank":2,"rays":[[1,0]],"maximal_cones":[[3]]})"));
            }).find("unknown ray"),
            std::string::npos);
}

TEST(Json, MalformedReportsLineAndColumn) {
  const std::string msg = message_of([] { io::parse("{\n  \"n\": 3,\n  \"circuits\": [[0,1]\n}", "m.json"); });
  EXPECT_EQ(msg.rfind("m.json:4:1: malformed JSON", 0), 0u) << msg;
  const std::string msg2 = message_of([] { io::parse("[1, 2,, 3]"); });
  EXPECT_EQ(msg2.rfind("input:1:7:", 0), 0u) << msg2;
}

TEST(Json, BigIntegers) {
  const Integer big = Integer("123456789012345678901234567890");
  const io::Json j = io::to_json(big);
  EXPECT_TRUE(j.is_string());
  EXPECT_EQ(io::integer_from_json(j, "x"), big);
  EXPECT_EQ(io::integer_from_json(io::to_json(-big), "x"), -big);
  EXPECT_TRUE(io::to_json(Integer(-7)).is_number_integer());
  EXPECT_THROW(io::integer_from_json(io::Json("12a"), "x"), io::InputError);
  EXPECT_THROW(io::integer_from_json(io::Json(1.5), "x"), io::InputError);
}

TEST(Json, WeightAndClassRoundTrip) {
  oracle::Gen gen(606);
  for (const auto& name : {"F1", "F3", "U23", "B3", "K4"}) {
    const RingPtr ring = ChowRing::create(*catalog::fan(name));
    for (int k = 0; k <= ring->dimension(); ++k) {
      MinkowskiWeight w(ring, k);
      for (const auto& b : minkowski_weight_basis(ring, k)) {
        MinkowskiWeight t = b;
        t *= Integer(gen.uniform(-4, 4));
        w += t;
      }
      EXPECT_EQ(io::weight_from_json(ring, io::parse(io::dump(io::to_json(w)))), w);
      ChowClass a(ring, k);
      for (auto& c : a.coefficients()) c = gen.uniform(-4, 4);
      const ChowClass back = io::class_from_json(ring, io::parse(io::dump(io::to_json(a))));
      EXPECT_EQ(back.coefficients(), a.coefficients());
    }
  }
}

TEST(Json, WeightRejectsForeignCone) {
  const RingPtr ring = ChowRing::create(catalog::f3());
  EXPECT_NE(message_of([&] {
              io::weight_from_json(ring, io::parse(R"({"degree":2,"weights":[{"cone":[0,1],"weight":1}]})"));
            }).find("not in the fan"),
            std::string::npos);
  EXPECT_NE(message_of([&] {
              io::weight_from_json(ring, io::parse(R"({"degree":2,"weights":[{"cone":[0],"weight":1}]})"));
            }).find("dimension"),
            std::string::npos);
}

TEST(Json, CertificateShape) {
  const auto cert = certify_poincare_duality(ChowRing::create(*catalog::fan("U23")));
  const io::Json j = io::to_json(cert);
  EXPECT_EQ(j["dimension"], 1);
  EXPECT_EQ(j["degrees"].size(), 2u);
  EXPECT_EQ(j["degrees"][0]["rank"], 1);
  EXPECT_EQ(j["degrees"][1]["rank"], 1);
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_TRUE(j["failure"].is_null());
  EXPECT_EQ(io::parse(io::dump(j)), j);

  const auto bad = io::to_json(certify_poincare_duality(ChowRing::create(catalog::two_rays())));
  EXPECT_FALSE(bad["pass"].get<bool>());
  EXPECT_NE(bad["failure"].get<std::string>().find("top-degree group not"), std::string::npos);
}

TEST(Json, MorphismInput) {
  const std::string f2 = io::dump(io::to_json(catalog::f2()));
  const auto m = io::morphism_from_json(
      io::parse(R"({"source":)" + f2 + R"(,"target":)" + f2 + R"(,"matrix":[[0,1],[1,0]]})"));
  EXPECT_EQ(m.matrix.rows(), 2u);
  EXPECT_THROW(io::morphism_from_json(io::parse(R"({"source":)" + f2 + R"(,"target":)" + f2 +
                                                R"(,"matrix":[[0,1]]})")),
               io::InputError);
}

TEST(Batch, EmptyIsEmpty) {
  const BatchReport r = batch_certify({}, {});
  EXPECT_TRUE(r.entries.empty());
  EXPECT_TRUE(r.pass());
}

TEST(Batch, DeterministicAcrossJobs) {
  std::vector<BatchItem> items;
  for (const auto& name : {"U23", "U24", "B3", "K4"}) items.push_back({name, *catalog::matroid(name), std::nullopt});
  BatchOptions one{2, 42, 1};
  BatchOptions four{2, 42, 4};
  const std::string a = io::dump(to_json(batch_certify(items, one)));
  const std::string b = io::dump(to_json(batch_certify(items, four)));
  EXPECT_EQ(a, b);
  EXPECT_TRUE(batch_certify(items, one).pass());
}

TEST(Batch, FailuresAreRecorded) {
  // Elimination fails for {0,1},{1,2} on three elements without {0,2}.
  std::vector<BatchItem> items{{"bad", Matroid(3, {ElementSet{0, 1}, ElementSet{1, 2}}), std::nullopt},
                               {"U23", catalog::uniform(2, 3), std::nullopt}};
  const BatchReport r = batch_certify(items, {});
  ASSERT_EQ(r.entries.size(), 2u);
  EXPECT_TRUE(r.entries[0].error.has_value());
  EXPECT_TRUE(r.entries[1].pass());
  EXPECT_FALSE(r.pass());
}

TEST(Catalog, EmitIsByteStable) {
  const std::string a = io::dump(io::to_json(*catalog::fan("B3")));
  const std::string b = io::dump(io::to_json(*catalog::fan("B3")));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, io::dump(io::to_json(catalog::f3())));
}
