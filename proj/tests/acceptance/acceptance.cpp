// One line per acceptance criterion; exit status 0 only if all pass.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "nilspace/corpus.hpp"
#include "nilspace/cube.hpp"
#include "nilspace/error.hpp"

using namespace nilspace;

namespace {

struct Outcome {
  bool ok = true;
  std::string note;
};

Outcome fail_with(std::string why) { return {false, std::move(why)}; }

Point pt(long a, long b) { return {Rational(a), Rational(b)}; }

// Z_2 x Z_2 as a table group with the degree-k filtration G_1 = .. = G_k = G.
FilteredGroup klein(int k) {
  std::vector<std::vector<GroupElem>> t(4, std::vector<GroupElem>(4));
  for (GroupElem a = 0; a < 4; ++a)
    for (GroupElem b = 0; b < 4; ++b) t[a][b] = a ^ b;
  return FilteredGroup(t, std::vector<std::vector<GroupElem>>(k, {0, 1, 2, 3}));
}

Outcome ac1() {
  struct Case {
    FilteredGroup g;
    Kinds kinds;
    std::function<Element(GroupElem)> elem;
  };
  std::vector<Case> cases;
  for (int k = 1; k <= 2; ++k) {
    for (long m = 1; m <= 4; ++m)
      cases.push_back({FilteredGroup::abelian_cyclic(int(m), k), {CoordKind::residues(m)},
                       [](GroupElem x) { return Element{Rational(long(x))}; }});
    cases.push_back({klein(k), {CoordKind::residues(2), CoordKind::residues(2)},
                     [](GroupElem x) { return Element{Rational(long(x & 1)), Rational(long(x >> 1))}; }});
  }
  std::uint64_t checked = 0;
  for (const auto& c : cases) {
    std::size_t order = c.g.order();
    for (int n = 0; n <= 3; ++n) {
      std::size_t len = std::size_t(1) << n;
      std::vector<GroupElem> v(len, 0);
      while (true) {
        CubeMap<GroupElem> q{n, v};
        CubeMap<Element> e{n, {}};
        for (auto x : v) e.values.push_back(c.elem(x));
        if (hk_cube_membership(c.g, q) != is_cube_degree_k(c.kinds, c.g.degree(), e))
          return fail_with("disagreement at |G|=" + std::to_string(order) + " n=" + std::to_string(n));
        ++checked;
        std::size_t i = 0;
        while (i < len && ++v[i] == order) v[i++] = 0;
        if (i == len) break;
      }
    }
  }
  return {true, std::to_string(checked) + " maps"};
}

Outcome ac2() {
  std::string note;
  for (auto [m, want] : {std::pair<long, std::size_t>{2, 8}, {3, 27}}) {
    auto sig = corpus::zm_zm(m, m);
    ProductNilspace X(sig);
    for (int s = 1; s <= sig.k; ++s) {
      Budget budget{2'000'000'000};
      auto group = enumerate_translation_group(sig, s, budget);
      std::set<std::vector<PointId>> param;
      for (const auto& a : group) param.insert(permutation_of(a, X));
      auto brute = all_translations_bruteforce(X, s, budget);
      std::set<std::vector<PointId>> bset(brute.begin(), brute.end());
      if (bset != param) return fail_with("sets differ for Z_" + std::to_string(m) + " s=" + std::to_string(s));
      if (s == 1 && group.size() != want)
        return fail_with("|tran_1| = " + std::to_string(group.size()) + " for Z_" + std::to_string(m));
      note += "Z_" + std::to_string(m) + " s=" + std::to_string(s) + ":" + std::to_string(group.size()) + " ";
    }
  }
  return {true, note};
}

Outcome ac3() {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    int dims = 1 + int(rng() % 3);
    bool rational = rng() % 2;
    std::vector<Slot> slots;
    for (int i = 0; i < dims; ++i) {
      int deg = 1 + int(rng() % 3);
      slots.push_back({deg, rational && rng() % 2 ? CoordKind::rationals() : CoordKind::integers()});
    }
    auto src = Signature::from_slots(3, slots);
    Kinds tgt{rational ? CoordKind::rationals() : CoordKind::integers()};
    int t = 1 + int(rng() % 3);
    PolyMorphism p{src, tgt, t, {}};
    for (const auto& m : monomials_up_to(src, t))
      if (rng() % 3) p.coeffs[m] = Element{Rational(long(rng() % 11) - 5, rational ? 1 + long(rng() % 4) : 1)};
    p.normalize();
    auto back = taylor_decompose(src, tgt, t, [&](const Point& x) { return p.eval(x); });
    if (!(back == p)) return fail_with("trial " + std::to_string(trial) + ": " + p.to_string());
    for (const auto& x : box_points(src.dim(), t + 3))
      if (back.eval(x) != p.eval(x)) return fail_with("values differ at trial " + std::to_string(trial));
  }
  return {true, "500 morphisms"};
}

Outcome ac4() {
  Budget budget{2'000'000'000};
  // (a)
  auto q = quotient(corpus::shift2(), budget, 3);
  if (q.structure_groups.size() != 2 || q.structure_groups[0].to_string() != "Z_2" ||
      q.structure_groups[1].to_string() != "Z_2")
    return fail_with("(a) structure groups");
  ProductNilspace target(corpus::zm_zm(2, 2));
  if (!find_isomorphism(*q.cubespace, target, 3, budget)) return fail_with("(a) no isomorphism");
  // (b)
  auto nc = corpus::noncongruence();
  auto img = orbit_image_cubespace(nc, budget, 3);
  auto q3 = corpus::noncongruence_q3();
  std::vector<PointId> lo(q3.begin(), q3.begin() + 4), hi(q3.begin() + 4, q3.end());
  auto dup = [](std::vector<PointId> h) {
    auto d = h;
    d.insert(d.end(), h.begin(), h.end());
    return d;
  };
  if (img->is_cube(q3) || !img->is_cube(dup(lo)) || !img->is_cube(dup(hi))) return fail_with("(b) q_3 gluing");
  if (verify_nilspace_axioms(*img, 3, budget).ok()) return fail_with("(b) orbit relation passes the axioms");
  if (check_fiber_transitive(nc, budget).fiber_transitive) return fail_with("(b) orbit group fiber-transitive");
  // (c)
  auto ar = check_fiber_transitive(corpus::alpha_r(), budget);
  if (ar.fiber_transitive || !ar.witness || ar.witness->x != pt(0, 0) || ar.witness->y != pt(0, 1))
    return fail_with("(c) alpha_r witness");
  if (!check_fiber_transitive(corpus::gamma_prime(), budget).fiber_transitive) return fail_with("(c) Gamma'");
  // (d)
  if (!is_free_fiber_transitive(corpus::shift2(), budget)) return fail_with("(d) H not free");
  if (is_free_fiber_transitive(corpus::shift2_twist(), budget)) return fail_with("(d) H' free");
  // (e)
  auto h5 = heisenberg_check_modular(5, 3, 2, 300, 1, budget);
  if (!h5.ok()) return fail_with("(e) Z_5: " + h5.failure);
  std::vector<Rational> grid = {Rational(0), Rational(1), Rational(-2), Rational(1, 2), Rational(-3, 4), Rational(5, 3)};
  auto hq = heisenberg_check_rational(grid, 3, 200, 9);
  if (!hq.ok()) return fail_with("(e) Q: " + hq.failure);
  return {true, "(a)-(e)"};
}

Subgroup random_subgroup(const FilteredGroup& g, std::mt19937& rng) {
  std::uniform_int_distribution<GroupElem> pick(0, GroupElem(g.order() - 1));
  int n = std::uniform_int_distribution<int>(0, 2)(rng);
  std::vector<GroupElem> gens;
  for (int i = 0; i < n; ++i) gens.push_back(pick(rng));
  return generated_subgroup(g, gens);
}

Outcome ac5() {
  auto G2 = FilteredGroup::unitriangular(3, 2);
  auto subs = all_subgroups(G2);
  int pairs = 0;
  for (const auto& K : subs)
    for (const auto& H : subs) {
      if (nilpair_condition(G2, K, H, 1).holds != nilpair_condition(G2, K, H, 2).holds)
        return fail_with("Z_2 pair disagrees");
      ++pairs;
    }
  auto G3 = FilteredGroup::unitriangular(3, 3);
  std::mt19937 rng(5);
  for (int t = 0; t < 200; ++t) {
    auto K = random_subgroup(G3, rng), H = random_subgroup(G3, rng);
    if (nilpair_condition(G3, K, H, 1).holds != nilpair_condition(G3, K, H, 2).holds)
      return fail_with("Z_3 pair " + std::to_string(t) + " disagrees");
  }
  return {true, std::to_string(pairs) + " + 200 pairs"};
}

Outcome ac6() {
  Budget budget{2'000'000'000};
  auto r = stabilizer_representation(corpus::zm_zm(2, 2), budget, 3);
  if (!r.bijective) return fail_with("not bijective");
  if (!r.cubes_forward || !r.cubes_backward) return fail_with("cubes not preserved");
  if (!r.equivariant) return fail_with("not equivariant");
  return {true, "|Tran| " + std::to_string(r.tran_order) + ", |K| " + std::to_string(r.stabilizer_order)};
}

double fourier_fourth(const SignalTable& f) {
  long N = f.group.factors().at(0);
  double s = 0;
  for (long xi = 0; xi < N; ++xi) {
    Complex c = 0;
    for (long x = 0; x < N; ++x) c += f.values[x] * std::polar(1.0, -2 * M_PI * double(xi * x % N) / double(N));
    s += std::pow(std::abs(c) / double(N), 4);
  }
  return s;
}

Outcome ac7() {
  Budget budget{4'000'000'000};
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> r(0, 1);
  double worst = 0;
  for (long N : {8, 12, 16})
    for (int t = 0; t < 100; ++t) {
      SignalTable f{FiniteAbelianGroup({N}), {}, false};
      for (long x = 0; x < N; ++x) f.values.push_back(std::polar(r(rng), 2 * M_PI * r(rng)));
      double u2 = gowers_norm(f, 2, budget);
      double err = std::abs(std::pow(u2, 4) - fourier_fourth(f));
      worst = std::max(worst, err);
      if (err > 1e-9) return fail_with("U^2 identity off by " + std::to_string(err));
      double prev = gowers_norm(f, 1, budget);
      for (int d = 2; d <= 3; ++d) {
        double cur = d == 2 ? u2 : gowers_norm(f, d, budget);
        if (prev > cur + 1e-9) return fail_with("monotonicity fails at d=" + std::to_string(d));
        prev = cur;
      }
    }
  auto q = quadratic_phase(64, 1);
  double u3 = gowers_norm(q, 3, budget);
  if (std::abs(u3 - 1) > 1e-9) return fail_with("U^3 of the quadratic phase is " + std::to_string(u3));
  auto chi = quadratic_nilcharacter(64, 1, budget);
  double c = correlation(q, chi, natural_surjection(q.group));
  if (c < 0.99) return fail_with("correlation " + std::to_string(c));
  char buf[96];
  std::snprintf(buf, sizeof buf, "max U^2 error %.1e, correlation %.12f", worst, c);
  return {true, buf};
}

Outcome ac8() {
  Budget budget{4'000'000'000};
  int verified = 0;
  auto axioms = [&](const FiniteCubespace& s, int d, const std::string& name) -> std::optional<Outcome> {
    if (!verify_nilspace_axioms(s, d, budget).ok()) return fail_with(name + " fails the axioms");
    ++verified;
    return std::nullopt;
  };
  // quotients of the corpus
  std::vector<std::pair<std::string, CongruenceCandidate>> quots = {{"shift2", corpus::shift2()},
                                                                     {"shift2_twist", corpus::shift2_twist()}};
  auto fin = corpus::zm_zm(4, 4);
  auto shift = [&](long a, long b) {
    return translation_from_displacement(fin, 1, [=](const Point&) { return pt(a, b); });
  };
  CongruenceCandidate h4{fin, {shift(2, 0), shift(0, 2)}, {}, {}};
  quots.push_back({"Z_4 shifts", h4});
  for (const auto& [name, c] : quots) {
    auto q = quotient(c, budget, c.base.k + 1);
    if (!q.cubespace) return fail_with(name + " has no finite quotient");
    if (auto r = axioms(*q.cubespace, c.base.k + 1, name)) return *r;
  }
  // double-coset quotients of groupable pairs over Z_2
  auto G = FilteredGroup::unitriangular(3, 2);
  for (const auto& K : all_subgroups(G))
    for (const auto& H : all_subgroups(G)) {
      DoubleCosetSpace D(G, K, H, budget);
      if (!D.groupable()) continue;
      if (auto r = axioms(D, 3, "double coset")) return *r;
    }
  // H against its closure and against the declared filtration equal to the induced one
  auto iso = [&](const CongruenceCandidate& a, const CongruenceCandidate& b, const std::string& name) -> std::optional<Outcome> {
    int d = a.base.k + 1;
    auto qa = quotient(a, budget, d), qb = quotient(b, budget, d);
    if (!find_isomorphism(*qa.cubespace, *qb.cubespace, d, budget)) return fail_with(name + " quotients differ");
    return std::nullopt;
  };
  auto hat = fiber_transitive_closure(h4, budget);
  if (auto r = iso(h4, hat, "Z_4 closure")) return *r;
  if (!filtrations_equivalent(h4, hat, budget, fin.k)) return fail_with("Z_4 closure not equivalent");
  auto declared = h4;
  declared.levels = {1, 2};
  if (auto r = iso(h4, declared, "Z_4 declared")) return *r;
  if (!filtrations_equivalent(h4, declared, budget, fin.k)) return fail_with("Z_4 declared not equivalent");
  auto sd = corpus::shift2();
  sd.levels = {1, 2};
  if (auto r = iso(corpus::shift2(), sd, "shift2 declared")) return *r;
  return {true, std::to_string(verified) + " quotients, 3 equivalences"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit;
    Outcome (*run)();
  };
  const Criterion all[] = {
      {1, "Gray-code/Host-Kra equivalence", 60, ac1},
      {2, "translation parametrization", 60, ac2},
      {3, "Taylor round trip", 30, ac3},
      {4, "worked-example regression", 120, ac4},
      {5, "nilpair conditions agree", 300, ac5},
      {6, "stabilizer representation", 60, ac6},
      {7, "Gowers suite", 60, ac7},
      {8, "quotient soundness", 120, ac8},
  };
  int failed = 0;
  for (const auto& c : all) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = fail_with(std::string("exception: ") + e.what());
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.ok && s > c.limit) o = fail_with("took longer than " + std::to_string(int(c.limit)) + " s");
    failed += !o.ok;
    std::printf("AC%d %s  %-32s %7.2fs  %s\n", c.id, o.ok ? "PASS" : "FAIL", c.name, s, o.note.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
