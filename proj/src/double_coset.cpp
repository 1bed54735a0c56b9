#include "nilspace/double_coset.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <random>
#include <set>

#include "nilspace/error.hpp"

namespace nilspace {

// ---------------------------------------------------------------- subgroups

std::optional<std::string> subgroup_violation(const FilteredGroup& g, const Subgroup& s) {
  std::vector<char> in(g.order(), 0);
  for (auto x : s) {
    if (x >= g.order()) return "element " + std::to_string(x) + " outside the group";
    in[x] = 1;
  }
  if (!in[g.identity()]) return "missing the identity";
  for (auto a : s) {
    if (!in[g.inv(a)]) return "not closed under inverses at " + g.label(a);
    for (auto b : s)
      if (!in[g.mul(a, b)]) return "not closed under products at " + g.label(a) + " * " + g.label(b);
  }
  return std::nullopt;
}

Subgroup generated_subgroup(const FilteredGroup& g, const std::vector<GroupElem>& gens) { return g.generate(gens); }

std::vector<Subgroup> all_subgroups(const FilteredGroup& g) {
  if (g.order() > 256) fail(ErrorKind::BudgetExceeded, "subgroup lattice of a group this large");
  std::set<Subgroup> found = {generated_subgroup(g, {})};
  std::vector<Subgroup> todo(found.begin(), found.end());
  while (!todo.empty()) {
    Subgroup s = todo.back();
    todo.pop_back();
    std::vector<char> in(g.order(), 0);
    for (auto x : s) in[x] = 1;
    for (GroupElem x = 0; x < g.order(); ++x) {
      if (in[x]) continue;
      std::vector<GroupElem> gens = s;
      gens.push_back(x);
      Subgroup t = generated_subgroup(g, gens);
      if (found.insert(t).second) todo.push_back(t);
    }
  }
  std::vector<Subgroup> out(found.begin(), found.end());
  std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

// ---------------------------------------------------------------- nilpair conditions

namespace {

using Mask = std::vector<char>;

Mask product_set(const FilteredGroup& g, const std::vector<GroupElem>& A, GroupElem x, const std::vector<GroupElem>& B) {
  Mask m(g.order(), 0);
  for (auto a : A) {
    GroupElem ax = g.mul(a, x);
    for (auto b : B) m[g.mul(ax, b)] = 1;
  }
  return m;
}

std::vector<GroupElem> intersect(const std::vector<GroupElem>& A, const std::vector<GroupElem>& B) {
  std::vector<GroupElem> a = A, b = B, out;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

NilpairReport nilpair_condition(const FilteredGroup& g, const Subgroup& K, const Subgroup& Gamma, int which) {
  if (which != 1 && which != 2) fail(ErrorKind::Invalid, "nilpair condition must be 1 or 2");
  if (auto v = subgroup_violation(g, K)) fail(ErrorKind::Invalid, "K: " + *v);
  if (auto v = subgroup_violation(g, Gamma)) fail(ErrorKind::Invalid, "Gamma: " + *v);
  NilpairReport rep;
  int k = g.degree();
  for (GroupElem x = 0; x < g.order(); ++x) {
    Mask kxg = product_set(g, K, x, Gamma);
    for (int i = 1; i <= k; ++i) {
      const auto& Gi = g.layer(i);
      Mask other = which == 1 ? product_set(g, Gi, x, Gamma) : product_set(g, K, x, Gi);
      Mask rhs = which == 1 ? product_set(g, intersect(K, Gi), x, Gamma) : product_set(g, K, x, intersect(Gamma, Gi));
      for (GroupElem y = 0; y < g.order(); ++y)
        if ((kxg[y] && other[y]) != bool(rhs[y])) {
          rep.holds = false;
          rep.witness = NilpairWitness{x, i};
          return rep;
        }
    }
  }
  return rep;
}

// ---------------------------------------------------------------- double cosets

DoubleCosetSpace::DoubleCosetSpace(const FilteredGroup& g, Subgroup K, Subgroup Gamma, Budget& budget, int cap)
    : g_(g), K_(std::move(K)), Gamma_(std::move(Gamma)), cap_(cap < 0 ? g.degree() + 1 : cap) {
  if (auto v = subgroup_violation(g_, K_)) fail(ErrorKind::Invalid, "K: " + *v);
  if (auto v = subgroup_violation(g_, Gamma_)) fail(ErrorKind::Invalid, "Gamma: " + *v);
  groupable_ = nilpair_condition(g_, K_, Gamma_, 2).holds;
  coset_.assign(g_.order(), PointId(-1));
  for (GroupElem x = 0; x < g_.order(); ++x) {
    if (coset_[x] != PointId(-1)) continue;
    PointId id = PointId(reps_.size());
    reps_.push_back(x);
    members_.emplace_back();
    Mask m = product_set(g_, K_, x, Gamma_);
    for (GroupElem y = 0; y < g_.order(); ++y)
      if (m[y]) {
        coset_[y] = id;
        members_.back().push_back(y);
      }
  }
  sets_.resize(cap_ + 1);
  for (int n = 0; n <= cap_; ++n) {
    budget.charge(hk_cube_count(g_, n));
    std::vector<PointId> img(std::size_t(1) << n);
    for_each_hk_cube(g_, n, [&](const std::vector<GroupElem>& q) {
      for (std::size_t v = 0; v < q.size(); ++v) img[v] = coset_[q[v]];
      sets_[n].insert(img);
      return true;
    });
  }
}

bool DoubleCosetSpace::is_cube(const PointId* q, int n) const {
  if (n <= cap_) return sets_[n].count(std::vector<PointId>(q, q + (std::size_t(1) << n))) != 0;
  // search for q' in cu^n(G) with q'(v) in the double coset q(v)
  std::size_t len = std::size_t(1) << n;
  std::vector<GroupElem> lift(len);
  std::vector<std::vector<Face>> checks(len);
  for (Vertex v = 1; v < len; ++v) checks[v] = faces_with_top(v);
  std::function<bool(Vertex)> rec = [&](Vertex v) -> bool {
    if (v == len) return !hk_first_failure(g_, lift, n).has_value();
    for (auto y : members_[q[v]]) {
      lift[v] = y;
      bool ok = true;
      for (const auto& f : checks[v]) {
        std::vector<GroupElem> sub(f.vertices.size());
        for (std::size_t t = 0; t < sub.size(); ++t) sub[t] = lift[f.vertices[t]];
        if (hk_first_failure(g_, sub, f.dim)) {
          ok = false;
          break;
        }
      }
      if (ok && rec(v + 1)) return true;
    }
    return false;
  };
  // left translation by a constant keeps cubes, so q'(0) may be taken as the representative
  lift[0] = reps_[q[0]];
  return rec(1);
}

bool DoubleCosetSpace::for_each_cube_fast(int n, Budget& budget, const CubeVisitor& visit) const {
  if (n > cap_) return false;
  std::vector<std::vector<PointId>> sorted(sets_[n].begin(), sets_[n].end());
  std::sort(sorted.begin(), sorted.end());
  budget.charge(sorted.size());
  for (const auto& c : sorted)
    if (!visit(c.data())) break;
  return true;
}

// ---------------------------------------------------------------- stabilizer

TranslationGroupTable translation_group_table(const Signature& space, Budget& budget) {
  ProductNilspace X(space);
  TranslationGroupTable out;
  out.translations = enumerate_translation_group(space, 1, budget);
  std::sort(out.translations.begin(), out.translations.end(), [&](const Translation& a, const Translation& b) {
    return permutation_of(a, X) < permutation_of(b, X);
  });
  std::unordered_map<std::vector<PointId>, GroupElem, VecHash> index;
  for (const auto& t : out.translations) {
    index[permutation_of(t, X)] = GroupElem(out.perms.size());
    out.perms.push_back(permutation_of(t, X));
  }
  std::size_t n = out.perms.size();
  std::vector<std::vector<GroupElem>> table(n, std::vector<GroupElem>(n));
  std::vector<PointId> comp(X.size());
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      budget.charge();
      for (PointId p = 0; p < X.size(); ++p) comp[p] = out.perms[a][out.perms[b][p]];
      auto it = index.find(comp);
      if (it == index.end()) fail(ErrorKind::Invalid, "translations not closed under composition");
      table[a][b] = it->second;
    }
  std::vector<std::vector<GroupElem>> layers;
  std::vector<std::string> labels;
  for (const auto& t : out.translations) labels.push_back(t.to_string());
  for (int i = 1; i <= space.k; ++i) {
    std::vector<GroupElem> L;
    for (std::size_t a = 0; a < n; ++a)
      if (natural_height(out.translations[a]) >= i) L.push_back(GroupElem(a));
    layers.push_back(L);
  }
  out.group = FilteredGroup(std::move(table), std::move(layers), std::move(labels));
  return out;
}

StabilizerReport stabilizer_representation(const Signature& space, Budget& budget, int dim,
                                           const std::optional<Point>& f0) {
  if (!space.is_finite()) fail(ErrorKind::Invalid, "stabilizer representation needs a finite product nilspace");
  ProductNilspace X(space);
  int k = space.k;
  if (dim < 0) dim = k + 1;
  PointId base = f0 ? X.index_of(reduce_point(space, *f0)) : X.index_of(Point(space.dim(), Rational(0)));
  auto T = translation_group_table(space, budget);
  const auto& G = T.group;
  StabilizerReport rep;
  rep.tran_order = G.order();
  rep.points = X.size();
  rep.dim = dim;
  Subgroup K;
  for (GroupElem g = 0; g < G.order(); ++g)
    if (T.perms[g][base] == base) K.push_back(g);
  rep.stabilizer_order = K.size();

  // psi(Kg) = g^-1(f0)
  auto psi_elem = [&](GroupElem g) { return T.perms[G.inv(g)][base]; };
  std::vector<PointId> coset(G.order(), PointId(-1));
  std::vector<GroupElem> reps;
  for (GroupElem g = 0; g < G.order(); ++g) {
    if (coset[g] != PointId(-1)) continue;
    for (auto h : K) coset[G.mul(h, g)] = PointId(reps.size());
    reps.push_back(g);
  }
  rep.cosets = reps.size();
  std::vector<char> hit(X.size(), 0);
  bool injective = true;
  for (auto g : reps) {
    PointId p = psi_elem(g);
    if (hit[p]) injective = false;
    hit[p] = 1;
  }
  rep.bijective = injective && std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
  // psi is well defined on cosets
  for (GroupElem g = 0; g < G.order(); ++g)
    if (psi_elem(g) != psi_elem(reps[coset[g]])) rep.bijective = false;

  rep.cubes_forward = rep.cubes_backward = true;
  for (int n = 0; n <= dim; ++n) {
    CubeSet images;
    std::vector<PointId> img(std::size_t(1) << n);
    budget.charge(hk_cube_count(G, n));
    for_each_hk_cube(G, n, [&](const std::vector<GroupElem>& q) {
      for (std::size_t v = 0; v < q.size(); ++v) img[v] = psi_elem(q[v]);
      if (rep.cubes_forward && !X.is_cube(img)) {
        rep.cubes_forward = false;
        rep.witness = img;
      }
      images.insert(img);
      return true;
    });
    std::size_t count = 0;
    for_each_cube(X, n, budget, [&](const PointId* q) {
      ++count;
      if (rep.cubes_backward && !images.count(std::vector<PointId>(q, q + (std::size_t(1) << n)))) {
        rep.cubes_backward = false;
        if (rep.witness.empty()) rep.witness.assign(q, q + (std::size_t(1) << n));
      }
      return true;
    });
    rep.cube_counts.push_back(count);
  }

  rep.equivariant = true;
  for (GroupElem g = 0; g < G.order() && rep.equivariant; ++g)
    for (GroupElem h = 0; h < G.order(); ++h) {
      budget.charge();
      if (psi_elem(G.mul(g, G.inv(h))) != T.perms[h][psi_elem(g)]) {
        rep.equivariant = false;
        break;
      }
    }
  return rep;
}

// ---------------------------------------------------------------- Heisenberg

namespace {

// Random cube of D_d(A) on {0,1}^n: sum over |S| <= d of c_S prod_{i in S} v_i.
template <class Draw>
std::vector<Rational> random_slot_cube(int n, int d, Draw&& draw) {
  std::size_t len = std::size_t(1) << n;
  std::vector<Rational> q(len, Rational(0));
  for (Vertex S = 0; S < len; ++S) {
    if (height(S) > d) continue;
    Rational c = draw();
    for (Vertex v = 0; v < len; ++v)
      if ((v & S) == S) q[v] += c;
  }
  return q;
}

struct HeisQ {  // (a, b, c) = [[1,a,c],[0,1,b],[0,0,1]]
  using E = std::array<Rational, 3>;
  E mul(const E& x, const E& y) const { return {x[0] + y[0], x[1] + y[1], x[2] + y[2] + x[0] * y[1]}; }
  E inv(const E& x) const { return {-x[0], -x[1], -x[2] + x[0] * x[1]}; }
  bool in(const E& x, int i) const {
    if (i <= 1) return true;
    if (i == 2) return x[0] == 0 && x[1] == 0;
    return x[0] == 0 && x[1] == 0 && x[2] == 0;
  }
};

bool f_cube_q(const std::vector<HeisQ::E>& pts, int n) {
  std::size_t len = std::size_t(1) << n;
  Kinds q1 = {CoordKind::rationals(), CoordKind::rationals()};
  Kinds q2 = {CoordKind::rationals()};
  CubeMap<Element> low{n, {}}, top{n, {}};
  for (std::size_t v = 0; v < len; ++v) {
    low.values.push_back({pts[v][0], pts[v][1]});
    top.values.push_back({pts[v][2]});
  }
  return is_cube_degree_k(q1, 1, low) && is_cube_degree_k(q2, 2, top);
}

}  // namespace

HeisenbergReport heisenberg_check_modular(int modulus, int dim, int exhaustive_dim, int samples, unsigned seed,
                                          Budget& budget) {
  HeisenbergReport rep;
  long m = modulus;
  FilteredGroup H = FilteredGroup::unitriangular(3, modulus);
  Signature sig = Signature::from_slots(2, {{1, CoordKind::residues(m)}, {1, CoordKind::residues(m)},
                                            {2, CoordKind::residues(m)}});
  ProductNilspace F(sig);
  // unitriangular indices are x_12 + m x_23 + m^2 x_13
  auto phi = [&](PointId p) {
    const std::int64_t* c = F.coords(p);
    return GroupElem(c[0] + m * c[1] + m * m * c[2]);
  };
  std::vector<PointId> phi_inv(H.order(), PointId(-1));
  for (PointId p = 0; p < F.size(); ++p) {
    GroupElem g = phi(p);
    if (g >= H.order() || phi_inv[g] != PointId(-1)) rep.points_bijective = false;
    else phi_inv[g] = p;
  }
  if (F.size() != H.order()) rep.points_bijective = false;
  if (!rep.points_bijective) {
    rep.failure = "phi is not a bijection on points";
    return rep;
  }

  const GroupElem e12 = 1, e23 = GroupElem(m);
  for (PointId p = 0; p < F.size(); ++p) {
    const std::int64_t* c = F.coords(p);
    Point x = F.point(p);
    Point ax = {x[0] + 1, x[1], x[2]};
    Point bx = {x[0], x[1] + 1, x[2] + Rational(c[0])};
    if (phi(F.index_of(reduce_point(sig, ax))) != H.mul(phi(p), e12) ||
        phi(F.index_of(reduce_point(sig, bx))) != H.mul(phi(p), e23)) {
      rep.generators_match = false;
      rep.failure = "generator images differ at " + F.label(p);
    }
  }

  std::mt19937 rng(seed);
  for (int n = 0; n <= dim; ++n) {
    std::size_t len = std::size_t(1) << n;
    std::uint64_t checked = 0;
    std::vector<GroupElem> img(len);
    std::vector<PointId> back(len);
    if (n <= exhaustive_dim) {
      std::uint64_t count = 0;
      for_each_cube(F, n, budget, [&](const PointId* q) {
        ++count;
        for (std::size_t v = 0; v < len; ++v) img[v] = phi(q[v]);
        if (hk_first_failure(H, img, n)) {
          rep.cubes_forward = false;
          rep.failure = "a cube of F maps outside the Host-Kra cubes in dimension " + std::to_string(n);
          return false;
        }
        return true;
      });
      budget.charge(hk_cube_count(H, n));
      for_each_hk_cube(H, n, [&](const std::vector<GroupElem>& q) {
        for (std::size_t v = 0; v < len; ++v) back[v] = phi_inv[q[v]];
        if (!F.is_cube(back)) {
          rep.cubes_backward = false;
          rep.failure = "a Host-Kra cube pulls back to a non-cube in dimension " + std::to_string(n);
          return false;
        }
        return true;
      });
      if (count != hk_cube_count(H, n)) {
        rep.cubes_backward = false;
        rep.failure = "cube counts differ in dimension " + std::to_string(n);
      }
      checked = count;
    } else {
      std::uniform_int_distribution<long> draw(0, m - 1);
      auto drawq = [&] { return Rational(draw(rng)); };
      for (int s = 0; s < samples; ++s) {
        budget.charge(len);
        auto x = random_slot_cube(n, 1, drawq), y = random_slot_cube(n, 1, drawq), z = random_slot_cube(n, 2, drawq);
        for (std::size_t v = 0; v < len; ++v)
          img[v] = phi(F.index_of(reduce_point(sig, {x[v], y[v], z[v]})));
        if (hk_first_failure(H, img, n)) {
          rep.cubes_forward = false;
          rep.failure = "a sampled cube of F maps outside the Host-Kra cubes";
        }
        // random Host-Kra cube in normal form
        std::vector<GroupElem> q(len, H.identity());
        for (Vertex v = 0; v < len; ++v) {
          const auto& L = H.layer(height(v));
          GroupElem g = L[std::uniform_int_distribution<std::size_t>(0, L.size() - 1)(rng)];
          for (Vertex w = 0; w < len; ++w)
            if ((w & v) == v) q[w] = H.mul(q[w], g);
        }
        for (std::size_t v = 0; v < len; ++v) back[v] = phi_inv[q[v]];
        if (!F.is_cube(back)) {
          rep.cubes_backward = false;
          rep.failure = "a sampled Host-Kra cube pulls back to a non-cube";
        }
        checked += 2;
      }
    }
    rep.checked.push_back(checked);
  }
  return rep;
}

HeisenbergReport heisenberg_check_rational(const std::vector<Rational>& grid, int dim, int samples, unsigned seed) {
  HeisenbergReport rep;
  if (grid.empty()) fail(ErrorKind::Invalid, "empty sample grid");
  std::mt19937 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, grid.size() - 1);
  auto draw = [&] { return grid[pick(rng)]; };
  HeisQ H;
  for (int n = 0; n <= dim; ++n) {
    std::size_t len = std::size_t(1) << n;
    std::uint64_t checked = 0;
    for (int s = 0; s < samples; ++s) {
      auto x = random_slot_cube(n, 1, draw), y = random_slot_cube(n, 1, draw), z = random_slot_cube(n, 2, draw);
      std::vector<HeisQ::E> img(len);
      for (std::size_t v = 0; v < len; ++v) img[v] = {x[v], y[v], z[v]};
      if (!f_cube_q(img, n) || hk_first_failure(H, img, n)) {
        rep.cubes_forward = false;
        rep.failure = "a sampled cube of F maps outside the Host-Kra cubes";
      }
      // one perturbed top vertex leaves both cube sets when n >= 3
      if (n >= 3) {
        auto bad = img;
        Rational d = draw();
        if (d == 0) d = 1;
        bad[len - 1][2] += d;
        if (f_cube_q(bad, n) || !hk_first_failure(H, bad, n)) {
          rep.cubes_forward = false;
          rep.failure = "a perturbed non-cube was accepted";
        }
      }
      std::vector<HeisQ::E> q(len, {Rational(0), Rational(0), Rational(0)});
      for (Vertex v = 0; v < len; ++v) {
        HeisQ::E g = {Rational(0), Rational(0), Rational(0)};
        if (height(v) <= 1) g = {draw(), draw(), draw()};
        else if (height(v) == 2) g = {Rational(0), Rational(0), draw()};
        for (Vertex w = 0; w < len; ++w)
          if ((w & v) == v) q[w] = H.mul(q[w], g);
      }
      if (!f_cube_q(q, n)) {
        rep.cubes_backward = false;
        rep.failure = "a sampled Host-Kra cube pulls back to a non-cube";
      }
      checked += 2;
    }
    rep.checked.push_back(checked);
  }

  // generators act as right multiplication by E_12 and E_23
  for (int s = 0; s < samples; ++s) {
    HeisQ::E p = {draw(), draw(), draw()};
    HeisQ::E ap = {p[0] + 1, p[1], p[2]}, bp = {p[0], p[1] + 1, p[2] + p[0]};
    if (ap != H.mul(p, {Rational(1), Rational(0), Rational(0)}) || bp != H.mul(p, {Rational(0), Rational(1), Rational(0)}))
      rep.generators_match = false;
  }

  // gamma_{a,b,c}(x,y) = (x+a, y+b+cx) on D_1(Q) x D_2(Q)
  Signature f2 = Signature::from_slots(2, {{1, CoordKind::rationals()}, {2, CoordKind::rationals()}});
  auto gamma = [&](const Rational& a, const Rational& b, const Rational& c) {
    return translation_from_displacement(f2, 1, [=](const Point& x) { return Point{a, b + c * x[0]}; });
  };
  auto params = [&](const Translation& t) {
    auto coeff = [](const PolyMorphism& P, const MultiIndex& m) {
      auto it = P.coeffs.find(m);
      return it == P.coeffs.end() ? Rational(0) : it->second[0];
    };
    return std::array<Rational, 3>{coeff(t.component(1), {}), coeff(t.component(2), {0}), coeff(t.component(2), {1})};
  };
  auto to_heis = [](const std::array<Rational, 3>& abc) { return HeisQ::E{abc[2], abc[0], abc[1]}; };
  for (int s = 0; s < samples; ++s) {
    std::array<Rational, 3> u = {draw(), draw(), draw()}, w = {draw(), draw(), draw()};
    Translation g = gamma(u[0], u[1], u[2]), h = gamma(w[0], w[1], w[2]);
    if (params(g) != u) rep.tran_isomorphism = false;
    if (to_heis(params(compose(g, h))) != H.mul(to_heis(u), to_heis(w))) {
      rep.tran_isomorphism = false;
      rep.failure = "gamma composition does not match the matrix product";
    }
  }
  return rep;
}

}  // namespace nilspace
