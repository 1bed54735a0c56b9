#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "nilspace/error.hpp"
#include "nilspace/translation.hpp"

using namespace nilspace;

namespace {

Slot zs(int d) { return {d, CoordKind::integers()}; }
Slot qs(int d) { return {d, CoordKind::rationals()}; }
Slot ms(int d, long m) { return {d, CoordKind::residues(m)}; }

Point pt(std::initializer_list<long> xs) {
  Point p;
  for (long x : xs) p.push_back(Rational(x));
  return p;
}

// beta(x,y,z) = (x, y+1, z+x) on D_1(Z^2) x D_2(Z), optionally mod m
Translation heis_beta(long m = 0) {
  Signature sig = m ? Signature::from_slots(2, {ms(1, m), ms(1, m), ms(2, m)})
                    : Signature::from_slots(2, {zs(1), zs(1), zs(2)});
  Translation b = identity_translation(sig, 1);
  b.components[0].coeffs[{}] = Element{Rational(0), Rational(1)};
  b.components[1].coeffs[{1, 0}] = Element{Rational(1)};
  for (auto& c : b.components) c.normalize();
  return b;
}

Translation heis_alpha(const Signature& sig) {
  Translation a = identity_translation(sig, 1);
  a.components[0].coeffs[{}] = Element{Rational(1), Rational(0)};
  a.components[0].normalize();
  return a;
}

Translation random_element(const Signature& sig, int s, std::mt19937& rng) {
  Budget budget;
  auto all = enumerate_translation_group(sig, s, budget);
  return all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)];
}

std::vector<Signature> small_finite_spaces() {
  std::vector<std::vector<long>> groups = {{2}, {3}, {4}, {2, 2}};
  std::vector<Signature> out;
  for (const auto& a : groups) out.push_back(Signature::finite(1, {a}));
  for (const auto& a : groups)
    for (const auto& b : groups) out.push_back(Signature::finite(2, {a, b}));
  return out;
}

}  // namespace

TEST(Translation, ActExamples) {
  Translation b = heis_beta();
  EXPECT_TRUE(is_valid_translation(b));
  EXPECT_EQ(b.act(pt({2, 0, 5})), pt({2, 1, 7}));
  Translation id = identity_translation(b.space);
  EXPECT_TRUE(id.is_identity());
  EXPECT_EQ(id.act(pt({3, -4, 9})), pt({3, -4, 9}));
}

TEST(Translation, GeneralFreeExample) {
  // (x,y,z,t) -> (x+a1, y+a2, z+a3+a4 x+a5 C(x,2)+a6 y, t+a7+a8 y)
  Signature sig = Signature::from_slots(3, {qs(1), zs(2), qs(3), zs(3)});
  Rational a1(1, 2), a3(2, 3), a4(-1, 5), a5(7, 4), a6(5, 2);
  Integer a2 = 3, a7 = -2, a8 = 4;
  Translation a = identity_translation(sig, 1);
  a.components[0].coeffs[{}] = Element{a1};
  a.components[1].coeffs[{0}] = Element{Rational(a2)};
  auto& T3 = a.components[2];
  T3.coeffs[{0, 0}] = Element{a3, Rational(a7)};
  T3.coeffs[{1, 0}] = Element{a4, Rational(0)};
  T3.coeffs[{2, 0}] = Element{a5, Rational(0)};
  T3.coeffs[{0, 1}] = Element{a6, Rational(a8)};
  for (auto& c : a.components) c.normalize();
  ASSERT_TRUE(is_valid_translation(a)) << *translation_violation(a);

  std::vector<Point> samples = {{Rational(0), Rational(0), Rational(0), Rational(0)},
                                {Rational(3, 7), Rational(-2), Rational(1, 3), Rational(5)},
                                {Rational(-5, 2), Rational(7), Rational(-9, 4), Rational(-1)}};
  for (const auto& p : samples) {
    Rational x = p[0], y = p[1], z = p[2], t = p[3];
    Point want = {x + a1, y + Rational(a2), z + a3 + a4 * x + a5 * x * (x - 1) / 2 + a6 * y,
                  t + Rational(a7) + Rational(a8) * y};
    EXPECT_EQ(a.act(p), want);
  }

  // x is continuous, so it may not feed the discrete degree-3 coordinate
  Translation bad = a;
  bad.components[2].coeffs[{1, 0}] = Element{a4, Rational(1)};
  EXPECT_TRUE(translation_violation(bad).has_value());
  // nor may y appear at degree 2
  Translation bad2 = a;
  bad2.components[2].coeffs[{0, 2}] = Element{Rational(0), Rational(1)};
  EXPECT_TRUE(translation_violation(bad2).has_value());
}

TEST(Translation, ComposeAndCommutator) {
  Translation b = heis_beta();
  Translation bb = compose(b, b);
  EXPECT_EQ(bb.act(pt({2, 0, 5})), pt({2, 2, 9}));
  Translation want = identity_translation(b.space);
  want.components[0].coeffs[{}] = Element{Rational(0), Rational(2)};
  want.components[1].coeffs[{1, 0}] = Element{Rational(2)};
  for (auto& c : want.components) c.normalize();
  EXPECT_TRUE(same_map(bb, want));

  Translation a = heis_alpha(b.space);
  Translation c = commutator(b, a);  // b^-1 a^-1 b a
  EXPECT_EQ(natural_height(c), 2);
  Translation c2 = as_height(c, 2);
  ASSERT_EQ(c2.components.size(), 1u);
  const auto& T = c2.components[0];
  ASSERT_EQ(T.coeffs.size(), 1u);
  EXPECT_EQ(T.coeffs.begin()->second, Element{Rational(1)});  // z -> z + 1
  EXPECT_EQ(c.act(pt({4, -3, 0})), pt({4, -3, 1}));
}

TEST(Translation, InverseRandomFinite) {
  Signature sig = Signature::finite(2, {{4}, {4}});
  ProductNilspace X(sig);
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Translation a = random_element(sig, 1, rng);
    Translation ai = invert(a);
    EXPECT_TRUE(compose(a, ai).is_identity());
    EXPECT_TRUE(compose(ai, a).is_identity());
    for (PointId p = 0; p < X.size(); ++p) EXPECT_EQ(ai.act(a.act(X.point(p))), X.point(p));
  }
}

TEST(Translation, ComposeMatchesActionRandom) {
  std::mt19937 rng(11);
  for (const auto& sig : small_finite_spaces()) {
    ProductNilspace X(sig);
    for (int trial = 0; trial < 5; ++trial) {
      int s1 = 1 + int(rng() % sig.k), s2 = 1 + int(rng() % sig.k);
      Translation a = random_element(sig, s1, rng), b = random_element(sig, s2, rng);
      Translation ab = compose(a, b);
      EXPECT_EQ(ab.height, std::min(s1, s2));
      EXPECT_TRUE(is_valid_translation(ab));
      for (PointId p = 0; p < X.size(); ++p) EXPECT_EQ(ab.act(X.point(p)), a.act(b.act(X.point(p))));
    }
  }
}

TEST(Translation, EtaExamplesAndHomomorphism) {
  Translation b = heis_beta();
  Translation b1 = eta(1, b);
  EXPECT_EQ(b1.space.k, 1);
  EXPECT_EQ(b1.act(pt({2, 0})), pt({2, 1}));
  EXPECT_TRUE(same_map(eta(2, b), b));

  std::mt19937 rng(5);
  for (const auto& sig : small_finite_spaces()) {
    if (sig.k < 2) continue;
    ProductNilspace X(sig);
    for (int trial = 0; trial < 4; ++trial) {
      Translation a = random_element(sig, 1, rng), c = random_element(sig, 1, rng);
      for (int j = 1; j <= sig.k; ++j) {
        EXPECT_TRUE(same_map(eta(j, compose(a, c)), compose(eta(j, a), eta(j, c))));
        for (PointId p = 0; p < X.size(); ++p) {
          Point x = X.point(p);
          EXPECT_EQ(truncate(sig, a.act(x), j), eta(j, a).act(truncate(sig, x, j)));
        }
      }
    }
  }
}

TEST(Translation, BruteForceExamples) {
  Budget budget;
  Translation b2 = heis_beta(2);
  ASSERT_TRUE(is_valid_translation(b2));
  ProductNilspace X(b2.space);
  EXPECT_TRUE(is_translation_bruteforce(X, permutation_of(b2, X), 1, budget).ok);

  // (x,y) -> (x, y + x^2) on D_1(Z_4) x D_2(Z_4)
  Signature sig = Signature::finite(2, {{4}, {4}});
  ProductNilspace Y(sig);
  std::vector<PointId> f(Y.size());
  for (PointId p = 0; p < Y.size(); ++p) {
    Point x = Y.point(p);
    f[p] = Y.index_of(reduce_point(sig, {x[0], x[1] + x[0] * x[0]}));
  }
  auto out = is_translation_bruteforce(Y, f, 1, budget);
  EXPECT_FALSE(out.ok);
  ASSERT_FALSE(out.witness_cube.empty());
  EXPECT_TRUE(Y.is_cube(out.witness_cube.data(), int(std::log2(out.witness_cube.size()))));
  EXPECT_FALSE(translation_from_map(Y, f, 1).has_value());

  // adding a constant in the top degree is a translation of height k
  Translation top = shift_translation(sig, 2, Element{Rational(3)});
  EXPECT_TRUE(is_translation_bruteforce(Y, permutation_of(top, Y), 2, budget).ok);
}

TEST(Translation, EnumerationCounts) {
  Budget budget;
  EXPECT_EQ(enumerate_translation_group(Signature::finite(1, {{2}}), 1, budget).size(), 2u);
  EXPECT_EQ(enumerate_translation_group(Signature::finite(2, {{2}, {2}}), 1, budget).size(), 8u);
  EXPECT_EQ(enumerate_translation_group(Signature::finite(2, {{}, {2}}), 1, budget).size(), 2u);
  EXPECT_EQ(enumerate_translation_group(Signature::finite(2, {{3}, {3}}), 1, budget).size(), 27u);
  EXPECT_EQ(enumerate_translation_group(Signature::finite(2, {{4}, {4}}), 1, budget).size(), 64u);
}

// Both containments: the parametrized group equals the set of maps passing the
// arrow test, for all |A_i| <= 4, k <= 2 and every height.
TEST(Translation, ParametrizationExhaustive) {
  for (const auto& sig : small_finite_spaces()) {
    ProductNilspace X(sig);
    for (int s = 1; s <= sig.k; ++s) {
      Budget budget;
      auto group = enumerate_translation_group(sig, s, budget);
      std::set<std::vector<PointId>> param;
      for (const auto& a : group) {
        auto f = permutation_of(a, X);
        EXPECT_TRUE(is_translation_bruteforce(X, f, s, budget).ok) << a.to_string();
        param.insert(f);
        auto back = translation_from_map(X, f, s);
        ASSERT_TRUE(back.has_value());
        EXPECT_TRUE(same_map(*back, a));
      }
      EXPECT_EQ(param.size(), group.size());
      auto brute = all_translations_bruteforce(X, s, budget);
      std::set<std::vector<PointId>> bset(brute.begin(), brute.end());
      EXPECT_EQ(bset, param) << "k=" << sig.k << " |X|=" << X.size() << " s=" << s;
    }
  }
}

TEST(Translation, HeightNesting) {
  for (const auto& sig : small_finite_spaces()) {
    ProductNilspace X(sig);
    Budget budget;
    for (int s = 1; s < sig.k; ++s) {
      std::set<std::vector<PointId>> lo, hi;
      for (const auto& a : enumerate_translation_group(sig, s, budget)) lo.insert(permutation_of(a, X));
      for (const auto& a : enumerate_translation_group(sig, s + 1, budget)) {
        hi.insert(permutation_of(a, X));
        EXPECT_GE(natural_height(a), s + 1);
        EXPECT_TRUE(same_map(as_height(a, s), a));
      }
      for (const auto& f : hi) EXPECT_TRUE(lo.count(f));
    }
    // tran_k is addition by A_k
    auto top = enumerate_translation_group(sig, sig.k, budget);
    auto pos = sig.slots_of_degree(sig.k);
    std::uint64_t ak = 1;
    for (auto p : pos) ak *= sig.slots[p].kind.modulus.get_ui();
    EXPECT_EQ(top.size(), ak);
    for (const auto& a : top)
      for (PointId p = 0; p < X.size(); ++p) {
        Point x = X.point(p), y = a.act(x);
        for (std::size_t t = 0; t < sig.dim(); ++t)
          if (sig.slots[t].degree < sig.k) {
            EXPECT_EQ(x[t], y[t]);
          }
        EXPECT_EQ(a.component(sig.k).degree, 0);
      }
  }
}

// Lifting through Z -> Z_m in the top degree: phi o beta = alpha o phi.
TEST(Translation, LiftThroughCovering) {
  struct Case {
    std::vector<Slot> free_part;
    int k;
    long m;
  };
  std::vector<Case> cases = {{{zs(1)}, 2, 3}, {{zs(1), zs(2)}, 3, 2}, {{zs(1), qs(1)}, 2, 2}};
  for (const auto& cs : cases) {
    auto slots = cs.free_part;
    slots.push_back(ms(cs.k, cs.m));
    Signature sigA = Signature::from_slots(cs.k, slots);
    slots.back() = zs(cs.k);
    Signature sigB = Signature::from_slots(cs.k, slots);
    for (int s = 1; s <= cs.k; ++s) {
      // every coefficient choice with integer entries in {-1,0,1} and residues in full
      std::vector<std::vector<std::pair<MultiIndex, std::size_t>>> cells;
      Translation base = identity_translation(sigA, s);
      std::vector<std::pair<int, std::pair<MultiIndex, std::size_t>>> slots_list;
      for (int i = s; i <= cs.k; ++i) {
        const auto& T = base.component(i);
        for (const auto& mi : monomials_up_to(T.source, T.degree))
          for (std::size_t c = 0; c < T.target.size(); ++c) {
            bool cont = false;
            for (std::size_t t = 0; t < mi.size(); ++t)
              if (mi[t] && !T.source.slots[t].kind.discrete()) cont = true;
            if (cont && T.target[c].discrete()) continue;
            slots_list.push_back({i, {mi, c}});
          }
      }
      std::vector<int> pick(slots_list.size(), 0);
      auto range = [&](std::size_t idx) {
        const auto& T = base.component(slots_list[idx].first);
        const auto& kind = T.target[slots_list[idx].second.second];
        return kind.ring == Ring::Residues ? int(kind.modulus.get_si()) : 3;
      };
      auto val = [&](std::size_t idx, int v) {
        const auto& kind = base.component(slots_list[idx].first).target[slots_list[idx].second.second];
        return kind.ring == Ring::Residues ? Rational(v) : Rational(v - 1, kind.ring == Ring::Rationals ? 2 : 1);
      };
      int checked = 0;
      while (true) {
        Translation a = base;
        for (std::size_t idx = 0; idx < slots_list.size(); ++idx) {
          auto& T = a.components[slots_list[idx].first - s];
          auto& e = T.coeffs[slots_list[idx].second.first];
          if (e.empty()) e = zero_element(T.target);
          e[slots_list[idx].second.second] = val(idx, pick[idx]);
        }
        for (auto& c : a.components) c.normalize();
        ASSERT_TRUE(is_valid_translation(a)) << *translation_violation(a);
        Translation b{sigB, s, {}};
        for (int i = s; i <= cs.k; ++i)
          b.components.push_back(i == cs.k ? lift_morphism(a.component(i)) : a.component(i));
        ASSERT_TRUE(is_valid_translation(b)) << *translation_violation(b);
        for (const auto& p : box_points(sigB.dim(), 3)) {
          Point x = p;
          x.back() -= 1;
          Point lhs = reduce_point(sigA, b.act(x));
          Point rhs = a.act(reduce_point(sigA, x));
          ASSERT_EQ(lhs, rhs);
        }
        ++checked;
        std::size_t idx = 0;
        while (idx < pick.size() && ++pick[idx] == range(idx)) pick[idx++] = 0;
        if (idx == pick.size()) break;
      }
      EXPECT_GT(checked, 0);
    }
  }
}

TEST(Translation, Errors) {
  Translation b = heis_beta();
  EXPECT_THROW(b.act(pt({1, 2})), Error);
  Translation c = heis_beta(2);
  EXPECT_THROW(compose(b, c), Error);
  EXPECT_THROW(as_height(b, 2), Error);
  Budget budget;
  EXPECT_THROW(enumerate_translation_group(b.space, 1, budget), Error);
}
