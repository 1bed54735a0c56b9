#include <gtest/gtest.h>

#include <random>
#include <set>

#include "nilspace/cube.hpp"
#include "nilspace/cubespace.hpp"
#include "nilspace/error.hpp"
#include "nilspace/filtered_group.hpp"

using namespace nilspace;

namespace {

Kinds zm(long m, int rank = 1) { return GroupSpec{Ring::Residues, Integer(m), rank}.coords(); }

CubeMap<Element> cube1(int n, const std::vector<long>& v) {
  CubeMap<Element> q{n, {}};
  for (long x : v) q.values.push_back({Rational(x)});
  return q;
}

// Naive Gray-code oracle: every (k+1)-face, found by looping over all vertex
// subsets that form a face, has alternating sum 0 mod m.
bool naive_gray(int k, int n, const std::vector<long>& vals, long m) {
  int len = 1 << n;
  for (int fixed_mask = 0; fixed_mask < len; ++fixed_mask) {
    int free_mask = (len - 1) & ~fixed_mask;
    if (__builtin_popcount(free_mask) != k + 1) continue;
    for (int base = 0; base < len; ++base) {
      if (base & free_mask) continue;
      long acc = 0;
      for (int v = 0; v < len; ++v)
        if ((v & fixed_mask) == base) acc += (__builtin_popcount(v & free_mask) % 2 ? -1 : 1) * vals[v];
      if (((acc % m) + m) % m) return false;
    }
  }
  return true;
}

}  // namespace

TEST(Rational, ParseAndFormat) {
  EXPECT_EQ(to_string(parse_rational("6/4")), "3/2");
  EXPECT_EQ(to_string(parse_rational("-3")), "-3");
  EXPECT_EQ(to_string(parse_rational("0/7")), "0");
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("x"), Error);
  EXPECT_EQ(binomial(Rational(1, 2), 2), Rational(-1, 8));
  EXPECT_EQ(binomial(Integer(-2), 3), Integer(-4));
  EXPECT_EQ(binomial(Integer(5), 7), Integer(0));
}

TEST(Sigma, AlternatingSum) {
  EXPECT_EQ(sigma(zm(4), cube1(2, {0, 1, 2, 3}).values), Element{Rational(0)});
  // indicator at 1^{k+1}: (-1)^{k+1} z
  EXPECT_EQ(sigma(zm(5), cube1(2, {0, 0, 0, 1}).values), Element{Rational(1)});
  EXPECT_EQ(sigma(zm(5), cube1(3, {0, 0, 0, 0, 0, 0, 0, 1}).values), Element{Rational(4)});
  EXPECT_THROW(sigma(zm(5), {{Rational(0)}, {Rational(0)}, {Rational(0)}}), Error);
}

TEST(IsCube, SmallCases) {
  EXPECT_FALSE(is_cube_degree_k(zm(4), 1, cube1(2, {0, 0, 0, 1})));
  EXPECT_TRUE(is_cube_degree_k(zm(4), 1, cube1(2, {0, 1, 2, 3})));
  // n <= k: everything is a cube
  EXPECT_TRUE(is_cube_degree_k(zm(4), 2, cube1(2, {0, 0, 0, 1})));
  EXPECT_THROW(is_cube_degree_k(zm(4), 1, cube1(2, {0, 1, 2})), Error);
}

TEST(IsCube, MatchesNaiveOracleExhaustively) {
  for (long m : {2L, 3L})
    for (int k = 1; k <= 2; ++k)
      for (int n = 0; n <= 3; ++n) {
        int len = 1 << n;
        std::vector<long> v(len, 0);
        while (true) {
          EXPECT_EQ(is_cube_degree_k(zm(m), k, cube1(n, v)), naive_gray(k, n, v, m));
          std::vector<std::int64_t> iv(v.begin(), v.end());
          EXPECT_EQ(gray_cube(k, n, iv.data(), m), naive_gray(k, n, v, m));
          int i = 0;
          while (i < len && ++v[i] == m) v[i++] = 0;
          if (i == len) break;
        }
      }
}

TEST(CornerCompletion, Examples) {
  CornerMap<Element> c{2, {{Rational(2)}, {Rational(5)}, {Rational(7)}}};
  auto q = complete_corner(GroupSpec{Ring::Integers, 0, 1}.coords(), 1, c);
  EXPECT_EQ(q.values[3], Element{Rational(10)});
  CornerMap<Element> c2{3, {}};
  for (int v = 0; v < 7; ++v) c2.values.push_back({Rational(v == 1 ? 1 : 0)});
  auto q2 = complete_corner(zm(4), 2, c2);
  EXPECT_EQ(q2.values[7], Element{Rational(3)});
  // n <= k fills with the value at the origin
  CornerMap<Element> c3{2, {{Rational(1)}, {Rational(2)}, {Rational(3)}}};
  EXPECT_EQ(complete_corner(zm(4), 2, c3).values[3], Element{Rational(1)});
}

TEST(CornerCompletion, UniqueAndValidExhaustive) {
  for (long m : {2L, 3L})
    for (int k = 1; k <= 2; ++k)
      for (int n = k + 1; n <= 3; ++n) {
        int len = 1 << n;
        std::vector<long> v(len - 1, 0);
        while (true) {
          // collect completions by brute force
          std::vector<long> good;
          std::vector<long> full(v);
          full.push_back(0);
          // the corner is valid iff the lower faces are cubes
          bool lower_ok = true;
          for (int i = 0; i < n; ++i) {
            std::vector<long> face;
            for (int w = 0; w < len; ++w)
              if (!((w >> i) & 1)) face.push_back(full[w]);
            if (!naive_gray(k, n - 1, face, m)) lower_ok = false;
          }
          for (long z = 0; z < m; ++z) {
            full[len - 1] = z;
            if (naive_gray(k, n, full, m)) good.push_back(z);
          }
          CornerMap<Element> c{n, {}};
          for (long x : v) c.values.push_back({Rational(x)});
          if (lower_ok) {
            ASSERT_EQ(good.size(), 1u);
            EXPECT_EQ(complete_corner(zm(m), k, c).values.back(), Element{Rational(good[0])});
          } else {
            EXPECT_THROW(complete_corner(zm(m), k, c), Error);
          }
          int i = 0;
          while (i < len - 1 && ++v[i] == m) v[i++] = 0;
          if (i == len - 1) break;
        }
      }
}

TEST(Enumerate, CountsAgainstComponentwiseOracle) {
  Budget b;
  ProductNilspace d2(Signature::finite(2, {{}, {2}}));
  EXPECT_EQ(enumerate_cubes(d2, 3, b).count(), 128u);
  ProductNilspace f(Signature::finite(2, {{2}, {2}}));
  // D_1(Z_2) has 2^3 two-cubes, D_2(Z_2) has all 2^4 maps as two-cubes
  std::uint64_t oracle = 8 * 16;
  EXPECT_EQ(enumerate_cubes(f, 2, b).count(), oracle);
  EXPECT_EQ(enumerate_cubes_bruteforce(f, 2, b).count(), oracle);
  EXPECT_EQ(slot_cube_count(1, 2, 2) * slot_cube_count(2, 2, 2), oracle);
}

TEST(Enumerate, FastPathEqualsBacktracking) {
  for (auto sig : {Signature::finite(2, {{2}, {2}}), Signature::finite(2, {{3}, {2}}),
                   Signature::finite(1, {{2, 2}}), Signature::finite(3, {{2}, {}, {2}})}) {
    ProductNilspace p(sig);
    for (int n = 0; n <= 3; ++n) {
      Budget b;
      auto fast = enumerate_cubes(p, n, b);
      auto slow = enumerate_cubes_bruteforce(p, n, b);
      std::set<std::vector<PointId>> a, c;
      for (std::size_t i = 0; i < fast.count(); ++i) a.insert(fast.cube_vec(i));
      for (std::size_t i = 0; i < slow.count(); ++i) c.insert(slow.cube_vec(i));
      EXPECT_EQ(a, c) << "n=" << n;
      EXPECT_EQ(a.size(), fast.count());
    }
  }
}

TEST(Enumerate, BudgetIsEnforced) {
  ProductNilspace p(Signature::finite(2, {{4}, {4}}));
  Budget b{1000};
  EXPECT_THROW(enumerate_cubes(p, 3, b), Error);
}

TEST(CubeGroup, ClosedUnderPointwiseAddition) {
  std::mt19937 rng(7);
  ProductNilspace p(Signature::finite(2, {{3}, {3}}));
  Budget b;
  auto cubes = enumerate_cubes(p, 3, b);
  for (int trial = 0; trial < 300; ++trial) {
    auto a = cubes.cube_vec(rng() % cubes.count());
    auto c = cubes.cube_vec(rng() % cubes.count());
    std::vector<PointId> s(a.size());
    for (std::size_t v = 0; v < a.size(); ++v) {
      Point x = p.point(a[v]), y = p.point(c[v]);
      for (std::size_t t = 0; t < x.size(); ++t) x[t] += y[t];
      s[v] = p.index_of(x);
    }
    EXPECT_TRUE(p.is_cube(s));
  }
}

TEST(FilteredGroup, UnitriangularLowerCentral) {
  auto g = FilteredGroup::unitriangular(3, 2);
  EXPECT_EQ(g.order(), 8u);
  EXPECT_EQ(g.degree(), 2);
  EXPECT_EQ(g.layer(2).size(), 2u);
  EXPECT_FALSE(g.validate().has_value());
  auto g3 = FilteredGroup::unitriangular(3, 3);
  EXPECT_EQ(g3.order(), 27u);
  EXPECT_FALSE(g3.validate().has_value());
}

TEST(FilteredGroup, RejectsBadFiltration) {
  auto g = FilteredGroup::unitriangular(3, 2);
  // G_2 = whole group violates [G_1,G_2] <= G_3 = {e}
  std::vector<std::vector<GroupElem>> table(8, std::vector<GroupElem>(8));
  for (GroupElem a = 0; a < 8; ++a)
    for (GroupElem b = 0; b < 8; ++b) table[a][b] = g.mul(a, b);
  std::vector<GroupElem> all{0, 1, 2, 3, 4, 5, 6, 7};
  FilteredGroup bad(table, {all, all});
  EXPECT_TRUE(bad.validate().has_value());
}

// Host-Kra membership agrees with the Gray-code test on abelian groups with
// G_i = G for i <= k.
TEST(HostKra, AgreesWithGrayCodeOnCyclic) {
  for (int m = 1; m <= 4; ++m)
    for (int k = 1; k <= 2; ++k) {
      auto g = FilteredGroup::abelian_cyclic(m, k);
      for (int n = 0; n <= 3; ++n) {
        int len = 1 << n;
        std::vector<long> v(len, 0);
        while (true) {
          CubeMap<GroupElem> q{n, {}};
          for (long x : v) q.values.push_back(static_cast<GroupElem>(x));
          EXPECT_EQ(hk_cube_membership(g, q), naive_gray(k, n, v, m));
          int i = 0;
          while (i < len && ++v[i] == m) v[i++] = 0;
          if (i == len) break;
        }
      }
    }
}

// The set accepted by peeling contains every face generator and is closed under
// multiplication, so it is exactly the Host-Kra cube group.
TEST(HostKra, PeelingSetIsTheCubeGroupHeisenberg) {
  auto g = FilteredGroup::unitriangular(3, 2);
  for (int n = 1; n <= 3; ++n) {
    std::size_t len = std::size_t(1) << n;
    std::vector<std::vector<GroupElem>> accepted;
    std::set<std::vector<GroupElem>> acc_set;
    for_each_hk_cube(g, n, [&](const std::vector<GroupElem>& q) {
      accepted.push_back(q);
      acc_set.insert(q);
      return true;
    });
    EXPECT_EQ(accepted.size(), hk_cube_count(g, n));
    EXPECT_EQ(acc_set.size(), accepted.size());
    for (const auto& q : accepted) EXPECT_TRUE(hk_cube_membership(g, {n, q}));
    // exhaustive membership count over all maps for n <= 2
    if (n <= 2) {
      std::size_t count = 0;
      std::vector<GroupElem> v(len, 0);
      while (true) {
        if (hk_cube_membership(g, {n, v})) {
          ++count;
          EXPECT_TRUE(acc_set.count(v));
        }
        std::size_t i = 0;
        while (i < len && ++v[i] == g.order()) v[i++] = 0;
        if (i == len) break;
      }
      EXPECT_EQ(count, acc_set.size());
    }
    for (int codim = 0; codim <= n; ++codim)
      for (const Face& f : faces(n, n - codim))
        for (auto x : g.layer(codim)) {
          std::vector<GroupElem> gen(len, g.identity());
          for (Vertex v : f.vertices) gen[v] = x;
          EXPECT_TRUE(acc_set.count(gen));
        }
    std::mt19937 rng(11);
    for (int t = 0; t < 2000; ++t) {
      const auto& a = accepted[rng() % accepted.size()];
      const auto& b = accepted[rng() % accepted.size()];
      std::vector<GroupElem> p(len);
      for (std::size_t v = 0; v < len; ++v) p[v] = g.mul(a[v], b[v]);
      EXPECT_TRUE(acc_set.count(p));
    }
  }
}

TEST(CubeMorphisms, CountAndFaces) {
  EXPECT_EQ(cube_morphisms(2, 3).size(), 216u);
  EXPECT_EQ(deposit(0b11, 0b1010), 0b1010u);
  EXPECT_EQ(faces(3, 2).size(), 6u);
  EXPECT_EQ(faces(3, 1).size(), 12u);
  EXPECT_EQ(faces_with_top(0b111).size(), 7u);
}
