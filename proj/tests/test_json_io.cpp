#include <gtest/gtest.h>

#include <random>

#include "nilspace/corpus.hpp"
#include "nilspace/error.hpp"
#include "nilspace/json_io.hpp"

using namespace nilspace;

TEST(JsonIo, Rationals) {
  EXPECT_EQ(rational_json(Rational(-3, 4)), "-3/4");
  EXPECT_EQ(rational_json(Rational(5)), "5");
  EXPECT_EQ(parse_rational_json(Json("6/8")), Rational(3, 4));
  EXPECT_EQ(parse_rational_json(Json(-7)), Rational(-7));
  EXPECT_THROW(parse_rational_json(Json(0.5)), Error);
  EXPECT_THROW(parse_rational_json(Json("1/0")), Error);
}

TEST(JsonIo, SignatureForms) {
  auto a = parse_signature(Json::parse(R"({"signature":{"k":2,"discrete":[1,1],"continuous":[0,0]}})"));
  EXPECT_EQ(a, corpus::z_z());
  auto b = parse_signature(Json::parse(R"({"k":2,"moduli":[[2],[4,4]]})"));
  EXPECT_EQ(b, Signature::finite(2, {{2}, {4, 4}}));
  auto c = parse_signature(Json::parse(R"({"k":3,"slots":[{"degree":1,"kind":"torus"},{"degree":3,"kind":"residues","modulus":5}]})"));
  EXPECT_EQ(c.dim(), 2u);
  EXPECT_EQ(c.slots[0].kind.ring, Ring::Torus);
  for (const auto& s : {a, b, c, corpus::q1_q3()}) EXPECT_EQ(parse_signature(signature_json(s)), s);
  EXPECT_THROW(parse_signature(Json::parse(R"({"k":2,"discrete":[1]})")), Error);
}

TEST(JsonIo, MorphismRoundTrip) {
  auto src = Signature::free(2, {1, 1}, {1, 0});
  PolyMorphism phi = zero_morphism(src, {CoordKind::rationals()}, 2);
  phi.coeffs[{1, 0, 1}] = {Rational(1, 3)};
  phi.coeffs[{0, 1, 0}] = {Rational(-2)};
  phi.coeffs[{2, 0, 0}] = {Rational(5, 2)};
  phi.normalize();
  Json j = morphism_json(phi);
  EXPECT_EQ(parse_morphism(j), phi);
  EXPECT_EQ(parse_morphism(Json::parse(j.dump())), phi);
  // (1,2) is the rational coordinate of degree 1
  EXPECT_TRUE(j.dump().find("\"(1,2)\":1") != std::string::npos);
  Json bad = j;
  bad["coeffs"][0]["index"] = {{"(3,1)", 1}};
  EXPECT_THROW(parse_morphism(bad), Error);
}

TEST(JsonIo, CandidateRoundTrip) {
  for (const auto& c : {corpus::shift2(), corpus::shift2_twist(), corpus::noncongruence(), corpus::alpha_r(),
                        corpus::gamma_prime()}) {
    auto back = parse_candidate(Json::parse(candidate_json(c).dump()));
    EXPECT_EQ(back.base, c.base);
    ASSERT_EQ(back.generators.size(), c.generators.size());
    for (std::size_t g = 0; g < c.generators.size(); ++g) {
      EXPECT_TRUE(same_map(back.generators[g], c.generators[g]));
      EXPECT_EQ(back.is_divisible(g), c.is_divisible(g));
    }
    EXPECT_EQ(candidate_json(back), candidate_json(c));
  }
  auto c = corpus::shift2();
  c.levels = {1, 2};
  auto back = parse_candidate(candidate_json(c));
  EXPECT_EQ(back.levels, c.levels);
  Json j = candidate_json(c);
  j["filtration"]["5"] = {0};
  EXPECT_THROW(parse_candidate(j), Error);
  j = candidate_json(c);
  j["filtration"]["2"] = {3};
  EXPECT_THROW(parse_candidate(j), Error);
}

TEST(JsonIo, SignalRoundTrip) {
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> r(-1, 1);
  SignalTable f{FiniteAbelianGroup({2, 6}), {}, false};
  for (int i = 0; i < 12; ++i) f.values.emplace_back(r(rng), r(rng));
  f.check_bounded();
  auto back = parse_signal(Json::parse(signal_json(f).dump()));
  EXPECT_EQ(back.group, f.group);
  EXPECT_EQ(back.values, f.values);  // shortest round-trip formatting keeps every bit
  EXPECT_THROW(parse_signal(Json::parse(R"({"group":[3],"values":[[1,0]]})")), Error);
  EXPECT_THROW(parse_signal(Json::parse(R"({"group":[4,2],"values":[]})")), Error);
}

TEST(JsonIo, Nilcharacter) {
  Budget budget{100'000'000};
  auto q = parse_nilcharacter(Json::parse(R"({"quadratic":{"N":16,"a":1}})"), budget);
  // the general form matching the quadratic shortcut
  Signature F = Signature::free(2, {0, 0}, {0, 1});
  Signature src = Signature::free(1, {1}, {0});
  PolyMorphism g1 = zero_morphism(src, F.kinds_of_degree(1), 1);
  PolyMorphism g2 = zero_morphism(src, F.kinds_of_degree(2), 2);
  g2.coeffs[{1}] = {Rational(1, 16)};
  g2.coeffs[{2}] = {Rational(1, 8)};
  Json j = {{"n", 1},
            {"target", signature_json(F)},
            {"components", {morphism_json(g1), morphism_json(g2)}},
            {"gamma", {translation_json(shift_translation(F, 2, {Rational(1)}))}},
            {"window", {{"phase", {"1"}}}}};
  auto chi = parse_nilcharacter(j, budget);
  for (long x = 0; x < 16; ++x) EXPECT_NEAR(std::abs(nilcharacter_eval(chi, {x}) - nilcharacter_eval(q, {x})), 0, 1e-12);
  j["window"] = {{"table", {{{"point", {"0"}}, {"value", {1, 0}}}}}};
  auto tab = parse_nilcharacter(j, budget);
  EXPECT_NEAR(std::abs(nilcharacter_eval(tab, {0}) - Complex(1, 0)), 0, 1e-15);
  EXPECT_THROW(nilcharacter_eval(tab, {1}), Error);
}

TEST(JsonIo, FilteredGroups) {
  auto g = parse_filtered_group(Json::parse(R"({"unitriangular":{"size":3,"modulus":3}})"));
  EXPECT_EQ(g.order(), 27u);
  auto z4 = parse_filtered_group(Json::parse(
      R"({"table":{"mul":[[0,1,2,3],[1,2,3,0],[2,3,0,1],[3,0,1,2]],"filtration":[[0,1,2,3],[0,2]]}})"));
  EXPECT_EQ(z4.degree(), 2);
  EXPECT_EQ(parse_subgroup(z4, Json::array({2})), (Subgroup{0, 2}));
  EXPECT_THROW(parse_subgroup(z4, Json::array({7})), Error);
  EXPECT_THROW(parse_filtered_group(Json::parse(R"({"table":{"mul":[[0,1],[1,1]],"filtration":[[0,1]]}})")), Error);
}

TEST(JsonIo, CorpusIsDeterministic) {
  auto a = example_corpus(), b = example_corpus();
  ASSERT_EQ(a.size(), 6u);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].second.dump(), b[i].second.dump());
}
