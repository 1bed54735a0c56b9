#include <gtest/gtest.h>

#include <random>
#include <set>

#include "nilspace/congruence.hpp"
#include "nilspace/double_coset.hpp"
#include "nilspace/error.hpp"

using namespace nilspace;

namespace {

// Unitriangular element index: x_12 + m x_23 + m^2 x_13.
GroupElem ut(int m, int a, int b, int c) { return GroupElem(a + m * b + m * m * c); }

Subgroup random_subgroup(const FilteredGroup& g, std::mt19937& rng) {
  std::uniform_int_distribution<GroupElem> pick(0, GroupElem(g.order() - 1));
  int n = std::uniform_int_distribution<int>(0, 2)(rng);
  std::vector<GroupElem> gens;
  for (int i = 0; i < n; ++i) gens.push_back(pick(rng));
  return generated_subgroup(g, gens);
}

}  // namespace

TEST(Nilpair, TrivialCases) {
  auto G = FilteredGroup::unitriangular(3, 2);
  Subgroup e = {G.identity()};
  Subgroup all(G.order());
  for (GroupElem x = 0; x < all.size(); ++x) all[x] = x;
  for (const auto& S : all_subgroups(G)) {
    EXPECT_TRUE(nilpair_condition(G, e, S, 2).holds);
    EXPECT_TRUE(nilpair_condition(G, e, S, 1).holds);
  }
  EXPECT_TRUE(nilpair_condition(G, all, all, 1).holds);
  EXPECT_TRUE(nilpair_condition(G, all, all, 2).holds);
  EXPECT_THROW(nilpair_condition(G, {1}, all, 2), Error);
  EXPECT_THROW(nilpair_condition(G, e, all, 3), Error);
}

TEST(Nilpair, SubgroupLattice) {
  // the dihedral group of order 8 has 10 subgroups, the Heisenberg group mod 3 has 19
  EXPECT_EQ(all_subgroups(FilteredGroup::unitriangular(3, 2)).size(), 10u);
  EXPECT_EQ(all_subgroups(FilteredGroup::unitriangular(3, 3)).size(), 19u);
}

TEST(Nilpair, ConditionsAgreeExhaustiveMod2) {
  auto G = FilteredGroup::unitriangular(3, 2);
  auto subs = all_subgroups(G);
  int failing = 0;
  for (const auto& K : subs)
    for (const auto& H : subs) {
      auto a = nilpair_condition(G, K, H, 1), b = nilpair_condition(G, K, H, 2);
      EXPECT_EQ(a.holds, b.holds);
      failing += !b.holds;
    }
  // frozen by exhaustive evaluation
  EXPECT_EQ(failing, 8);
  // K = <E_12>, Gamma = <E_23>
  auto K = generated_subgroup(G, {ut(2, 1, 0, 0)}), H = generated_subgroup(G, {ut(2, 0, 1, 0)});
  EXPECT_TRUE(nilpair_condition(G, K, H, 2).holds);
  // K = Gamma = <E_12>: x = E_23 gives E_23 E_12 = E_12 E_23 E_13^-1 ... inside K x G_2 but not K x (Gamma cap G_2)
  auto r = nilpair_condition(G, K, K, 2);
  EXPECT_FALSE(r.holds);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(r.witness->i, 2);
}

TEST(Nilpair, ConditionsAgreeRandomMod3) {
  auto G = FilteredGroup::unitriangular(3, 3);
  std::mt19937 rng(5);
  for (int t = 0; t < 200; ++t) {
    auto K = random_subgroup(G, rng), H = random_subgroup(G, rng);
    EXPECT_EQ(nilpair_condition(G, K, H, 1).holds, nilpair_condition(G, K, H, 2).holds);
  }
}

TEST(DoubleCoset, BuildExamples) {
  Budget budget{500'000'000};
  auto G = FilteredGroup::unitriangular(3, 3);
  Subgroup e = {G.identity()};
  DoubleCosetSpace D(G, e, e, budget, 2);
  EXPECT_EQ(D.size(), 27u);
  for (int n = 0; n <= 2; ++n) EXPECT_EQ(enumerate_cubes(D, n, budget).count(), hk_cube_count(G, n));

  Subgroup z = generated_subgroup(G, {ut(3, 0, 0, 1)});
  DoubleCosetSpace C(G, e, z, budget, 2);
  EXPECT_EQ(C.size(), 9u);
  EXPECT_TRUE(C.groupable());
  EXPECT_TRUE(verify_nilspace_axioms(C, 2, budget).ok());

  Subgroup all(G.order());
  for (GroupElem x = 0; x < all.size(); ++x) all[x] = x;
  DoubleCosetSpace P(G, all, all, budget, 2);
  EXPECT_EQ(P.size(), 1u);
  EXPECT_TRUE(verify_nilspace_axioms(P, 2, budget).ok());
}

TEST(DoubleCoset, MembershipAboveCap) {
  Budget budget{500'000'000};
  auto G = FilteredGroup::unitriangular(3, 2);
  auto K = generated_subgroup(G, {ut(2, 1, 0, 0)});
  auto H = generated_subgroup(G, {ut(2, 0, 1, 0)});
  DoubleCosetSpace low(G, K, H, budget, 2);
  DoubleCosetSpace high(G, K, H, budget, 3);
  ASSERT_EQ(low.size(), high.size());
  std::size_t len = 8, N = low.size(), total = 1;
  for (std::size_t v = 0; v < len; ++v) total *= N;
  std::vector<PointId> q(len);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (auto& x : q) x = PointId(c % N), c /= N;
    ASSERT_EQ(low.is_cube(q), high.is_cube(q));
  }
}

// With K trivial the double cosets are the right-multiplication orbits of Gamma.
TEST(DoubleCoset, CosetCaseMatchesRightQuotient) {
  Budget budget{500'000'000};
  for (int m : {2, 3}) {
    auto G = FilteredGroup::unitriangular(3, m);
    Subgroup e = {G.identity()};
    for (const auto& S : all_subgroups(G)) {
      DoubleCosetSpace D(G, e, S, budget, 2);
      std::vector<GroupElem> cls(G.order());
      for (GroupElem x = 0; x < G.order(); ++x) {
        GroupElem best = x;
        for (auto s : S) best = std::min(best, G.mul(x, s));
        cls[x] = best;
      }
      std::set<GroupElem> reps(cls.begin(), cls.end());
      ASSERT_EQ(D.size(), reps.size());
      for (GroupElem x = 0; x < G.order(); ++x) EXPECT_EQ(D.representative(D.coset_of(x)), cls[x]);
      for (int n = 0; n <= 2; ++n) {
        std::set<std::vector<GroupElem>> oracle;
        for_each_hk_cube(G, n, [&](const std::vector<GroupElem>& q) {
          std::vector<GroupElem> img(q.size());
          for (std::size_t v = 0; v < q.size(); ++v) img[v] = cls[q[v]];
          oracle.insert(img);
          return true;
        });
        std::set<std::vector<GroupElem>> got;
        for_each_cube(D, n, budget, [&](const PointId* q) {
          std::vector<GroupElem> img(std::size_t(1) << n);
          for (std::size_t v = 0; v < img.size(); ++v) img[v] = D.representative(q[v]);
          got.insert(img);
          return true;
        });
        EXPECT_EQ(got, oracle);
      }
    }
  }
}

// Groupable pairs give nilspaces; the non-groupable pairs found by the search do not.
TEST(DoubleCoset, AxiomsFollowGroupability) {
  Budget budget{2'000'000'000};
  auto G = FilteredGroup::unitriangular(3, 2);
  auto subs = all_subgroups(G);
  int bad_pairs = 0;
  for (const auto& K : subs)
    for (const auto& H : subs) {
      DoubleCosetSpace D(G, K, H, budget);
      bool ok = verify_nilspace_axioms(D, 3, budget).ok();
      EXPECT_EQ(ok, D.groupable());
      bad_pairs += !D.groupable();
    }
  EXPECT_EQ(bad_pairs, 8);
}

TEST(Stabilizer, ProductOfZ2) {
  Budget budget{500'000'000};
  auto r = stabilizer_representation(Signature::finite(2, {{2}, {2}}), budget);
  EXPECT_EQ(r.tran_order, 8u);
  EXPECT_EQ(r.stabilizer_order, 2u);
  EXPECT_EQ(r.cosets, 4u);
  EXPECT_EQ(r.points, 4u);
  EXPECT_TRUE(r.bijective);
  EXPECT_TRUE(r.cubes_forward);
  EXPECT_TRUE(r.cubes_backward);
  EXPECT_TRUE(r.equivariant);
  EXPECT_EQ(r.cube_counts, (std::vector<std::size_t>{4, 16, 128, 2048}));

  auto one = stabilizer_representation(Signature::finite(1, {{2}}), budget);
  EXPECT_EQ(one.tran_order, 2u);
  EXPECT_EQ(one.stabilizer_order, 1u);
  EXPECT_TRUE(one.ok());

  // another base point gives a conjugate stabilizer of the same size
  auto other = stabilizer_representation(Signature::finite(2, {{2}, {2}}), budget, 3, Point{Rational(1), Rational(1)});
  EXPECT_EQ(other.stabilizer_order, 2u);
  EXPECT_TRUE(other.ok());
}

TEST(Stabilizer, ProductOfZ3) {
  Budget budget{500'000'000};
  auto r = stabilizer_representation(Signature::finite(2, {{3}, {3}}), budget);
  EXPECT_EQ(r.tran_order, 27u);
  EXPECT_EQ(r.stabilizer_order, 3u);
  EXPECT_EQ(r.cosets, 9u);
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.cube_counts, (std::vector<std::size_t>{9, 81, 2187, 177147}));
}

TEST(Heisenberg, Modular) {
  Budget budget{2'000'000'000};
  auto r5 = heisenberg_check_modular(5, 3, 2, 300, 1, budget);
  EXPECT_TRUE(r5.ok()) << r5.failure;
  EXPECT_EQ(r5.checked[2], hk_cube_count(FilteredGroup::unitriangular(3, 5), 2));
  auto r3 = heisenberg_check_modular(3, 3, 3, 0, 1, budget);
  EXPECT_TRUE(r3.ok()) << r3.failure;
  auto r2 = heisenberg_check_modular(2, 4, 4, 0, 1, budget);
  EXPECT_TRUE(r2.ok()) << r2.failure;
}

TEST(Heisenberg, RationalGrid) {
  std::vector<Rational> grid = {Rational(0), Rational(1), Rational(-2), Rational(1, 2), Rational(-3, 4), Rational(5, 3)};
  auto r = heisenberg_check_rational(grid, 3, 200, 9);
  EXPECT_TRUE(r.ok()) << r.failure;
  EXPECT_EQ(r.checked.size(), 4u);
}

TEST(Heisenberg, ConstantCubes) {
  // constant maps are cubes on both sides; phi of the origin is the identity matrix
  auto G = FilteredGroup::unitriangular(3, 5);
  for (GroupElem g = 0; g < G.order(); ++g) {
    std::vector<GroupElem> q(8, g);
    EXPECT_FALSE(hk_first_failure(G, q, 3).has_value());
  }
  EXPECT_EQ(G.identity(), ut(5, 0, 0, 0));
}
