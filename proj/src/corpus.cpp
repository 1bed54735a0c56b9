#include "nilspace/corpus.hpp"

#include <cmath>

namespace nilspace {

namespace corpus {

namespace {

Translation disp(const Signature& s, const PointFunction& f) { return translation_from_displacement(s, 1, f); }

Point pt(long a, long b) { return {Rational(a), Rational(b)}; }

}  // namespace

Signature z_z() { return Signature::free(2, {1, 1}, {0, 0}); }
Signature zm_zm(long a, long b) { return Signature::finite(2, {{a}, {b}}); }
Signature q1_q3() { return Signature::free(3, {0, 0, 0}, {1, 0, 1}); }

CongruenceCandidate shift2() {
  auto s = z_z();
  return {s, {disp(s, [](const Point&) { return pt(2, 0); }), disp(s, [](const Point&) { return pt(0, 2); })}, {}, {}};
}

CongruenceCandidate shift2_twist() {
  auto c = shift2();
  c.generators.push_back(disp(c.base, [](const Point& x) { return Point{Rational(0), 2 * x[0]}; }));
  return c;
}

CongruenceCandidate noncongruence() {
  auto s = zm_zm(2, 2);
  return {s, {disp(s, [](const Point& x) { return Point{Rational(0), x[0]}; })}, {}, {}};
}

CongruenceCandidate alpha_r() {
  auto s = q1_q3();
  return {s, {disp(s, [](const Point& x) { return Point{Rational(0), x[0] * x[0] + 1}; })}, {true}, {}};
}

CongruenceCandidate gamma_prime() {
  auto s = q1_q3();
  return {s, {disp(s, [](const Point&) { return pt(0, 1); })}, {true}, {}};
}

std::vector<PointId> noncongruence_q3() { return {0, 0, 0, 1, 0, 0, 0, 0}; }

}  // namespace corpus

double rounded(double x) {
  double r = std::round(x * 1e12) / 1e12;
  return r == 0 ? 0.0 : r;
}

namespace {

Json labels(const FiniteCubespace& s, const std::vector<PointId>& q) {
  Json j = Json::array();
  for (auto p : q) j.push_back(s.label(p));
  return j;
}

Json points(const std::vector<Point>& ps) {
  Json j = Json::array();
  for (const auto& p : ps) j.push_back(point_json(p));
  return j;
}

Json heisenberg_json(const HeisenbergReport& r) {
  return {{"ok", r.ok()},
          {"points_bijective", r.points_bijective},
          {"cubes_forward", r.cubes_forward},
          {"cubes_backward", r.cubes_backward},
          {"generators_match", r.generators_match},
          {"tran_isomorphism", r.tran_isomorphism},
          {"checked", r.checked},
          {"failure", r.failure}};
}

Json heisenberg_example() {
  Budget budget{2'000'000'000};
  Json j;
  j["modular"] = heisenberg_json(heisenberg_check_modular(5, 3, 2, 300, 1, budget));
  j["modular"]["modulus"] = 5;
  std::vector<Rational> grid = {Rational(0), Rational(1), Rational(-2), Rational(1, 2), Rational(-3, 4), Rational(5, 3)};
  j["rational"] = heisenberg_json(heisenberg_check_rational(grid, 3, 200, 9));
  j["rational"]["grid"] = element_json(grid);
  return j;
}

Json shift_quotient_example() {
  Budget budget{500'000'000};
  auto c = corpus::shift2();
  auto q = quotient(c, budget, 3);
  ProductNilspace target(corpus::zm_zm(2, 2));
  auto iso = find_isomorphism(*q.cubespace, target, 3, budget);
  Json j;
  j["candidate"] = candidate_json(c);
  j["fiber_transitive"] = q.ft.fiber_transitive;
  j["structure_groups"] = invariants_json(q.structure_groups);
  j["representatives"] = points(q.representatives);
  j["isomorphic_to"] = signature_json(target.signature());
  Json map = Json::object();
  if (iso)
    for (PointId p = 0; p < iso->size(); ++p) map[q.cubespace->label(p)] = target.label((*iso)[p]);
  j["isomorphism"] = map;
  j["axioms"] = axiom_report_json(verify_nilspace_axioms(*q.cubespace, 3, budget), *q.cubespace);
  return j;
}

Json noncongruence_example() {
  Budget budget{500'000'000};
  auto c = corpus::noncongruence();
  auto img = orbit_image_cubespace(c, budget, 3);
  auto q3 = corpus::noncongruence_q3();
  std::vector<PointId> lower(q3.begin(), q3.begin() + 4), upper(q3.begin() + 4, q3.end());
  auto dup = [](std::vector<PointId> h) {
    auto d = h;
    d.insert(d.end(), h.begin(), h.end());
    return d;
  };
  Json j;
  j["candidate"] = candidate_json(c);
  j["ft"] = ft_report_json(check_fiber_transitive(c, budget));
  j["orbit_representatives"] = points(orbit_representatives(c, budget));
  j["q3"] = labels(*img, q3);
  j["q3_is_cube"] = img->is_cube(q3);
  j["halves_are_cubes"] = {img->is_cube(dup(lower)), img->is_cube(dup(upper))};
  auto glue = gluing_failure(*img, 3, budget);
  j["gluing_failure"] = glue ? labels(*img, *glue) : Json(nullptr);
  j["axioms"] = axiom_report_json(verify_nilspace_axioms(*img, 3, budget), *img);
  return j;
}

Json ft_failure_example() {
  Budget budget{500'000'000};
  Json j;
  auto a = corpus::alpha_r();
  j["alpha_r"] = {{"candidate", candidate_json(a)}, {"report", ft_report_json(check_fiber_transitive(a, budget))}};
  auto g = corpus::gamma_prime();
  auto q = quotient(g, budget);
  j["gamma_prime"] = {{"candidate", candidate_json(g)},
                      {"report", ft_report_json(q.ft)},
                      {"structure_groups", invariants_json(q.structure_groups)}};
  j["free"] = {{"H", is_free_fiber_transitive(corpus::shift2(), budget)},
               {"H_prime", is_free_fiber_transitive(corpus::shift2_twist(), budget)},
               {"H_prime_fiber_transitive", check_fiber_transitive(corpus::shift2_twist(), budget).fiber_transitive}};
  return j;
}

Json stabilizer_example() {
  Budget budget{500'000'000};
  auto sig = corpus::zm_zm(2, 2);
  auto r = stabilizer_representation(sig, budget);
  return {{"space", signature_json(sig)},
          {"tran_order", r.tran_order},
          {"stabilizer_order", r.stabilizer_order},
          {"cosets", r.cosets},
          {"points", r.points},
          {"bijective", r.bijective},
          {"cubes_forward", r.cubes_forward},
          {"cubes_backward", r.cubes_backward},
          {"equivariant", r.equivariant},
          {"dim", r.dim},
          {"cube_counts", r.cube_counts}};
}

Json quadratic_example() {
  Budget budget{2'000'000'000};
  Json j = Json::array();
  for (long N : {32L, 64L}) {
    auto f = quadratic_phase(N, 1);
    auto chi = quadratic_nilcharacter(N, 1, budget);
    auto s = natural_surjection(f.group);
    j.push_back({{"N", N},
                 {"a", 1},
                 {"u2", rounded(gowers_norm(f, 2, budget))},
                 {"u3", rounded(gowers_norm(f, 3, budget))},
                 {"correlation", rounded(correlation(f, chi, s))},
                 {"mismatched_correlation", rounded(correlation(quadratic_phase(N, 3), chi, s))}});
  }
  return j;
}

}  // namespace

std::vector<std::pair<std::string, Json>> example_corpus() {
  return {{"heisenberg", heisenberg_example()},
          {"shift_quotient", shift_quotient_example()},
          {"noncongruence_orbit", noncongruence_example()},
          {"ft_failure", ft_failure_example()},
          {"stabilizer", stabilizer_example()},
          {"quadratic_correlation", quadratic_example()}};
}

}  // namespace nilspace
