#include "nilspace/congruence.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "nilspace/error.hpp"

namespace nilspace {

// ---------------------------------------------------------------- finite groups

FiniteTranslationGroup::FiniteTranslationGroup(const ProductNilspace& space,
                                               const std::vector<std::vector<PointId>>& gens, Budget& budget,
                                               std::size_t cap)
    : space_(&space) {
  std::vector<PointId> id(space.size());
  for (PointId p = 0; p < id.size(); ++p) id[p] = p;
  elems_.push_back(id);
  index_[id] = 0;
  std::deque<std::size_t> todo = {0};
  std::vector<PointId> prod(id.size());
  while (!todo.empty()) {
    std::size_t e = todo.front();
    todo.pop_front();
    for (const auto& g : gens) {
      budget.charge(id.size());
      for (PointId p = 0; p < id.size(); ++p) prod[p] = g[elems_[e][p]];
      if (index_.count(prod)) continue;
      if (elems_.size() >= cap) fail(ErrorKind::BudgetExceeded, "group saturation exceeded the element cap");
      index_[prod] = elems_.size();
      elems_.push_back(prod);
      todo.push_back(elems_.size() - 1);
    }
  }
  trans_.resize(elems_.size());
}

std::optional<std::size_t> FiniteTranslationGroup::find(const std::vector<PointId>& f) const {
  auto it = index_.find(f);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const Translation& FiniteTranslationGroup::translation(std::size_t e) const {
  if (!trans_[e]) {
    auto t = translation_from_map(*space_, elems_[e], 1);
    if (!t) fail(ErrorKind::NotMorphism, "group element is not a translation");
    trans_[e] = std::move(*t);
  }
  return *trans_[e];
}

int FiniteTranslationGroup::height(std::size_t e) const { return natural_height(translation(e)); }

// ---------------------------------------------------------------- candidates

std::optional<std::string> candidate_violation(const CongruenceCandidate& c) {
  if (c.base.k < 1) return "base must have step at least 1";
  if (!c.levels.empty() && c.levels.size() != c.generators.size()) return "one filtration level per generator";
  if (!c.divisible.empty() && c.divisible.size() != c.generators.size()) return "one divisibility flag per generator";
  for (std::size_t g = 0; g < c.generators.size(); ++g) {
    const auto& t = c.generators[g];
    if (!(t.space == c.base)) return "generator " + std::to_string(g) + " acts on a different space";
    if (auto v = translation_violation(t)) return "generator " + std::to_string(g) + ": " + *v;
    int lv = c.level(g);
    if (lv < 1 || lv > c.base.k) return "generator " + std::to_string(g) + " has level out of range";
    if (natural_height(t) < lv)
      return "generator " + std::to_string(g) + " is not in tran_" + std::to_string(lv);
    if (c.is_divisible(g) && c.base.is_finite()) return "divisible generators need a free base";
  }
  return std::nullopt;
}

static void require_valid(const CongruenceCandidate& c) {
  if (auto v = candidate_violation(c)) fail(ErrorKind::Invalid, *v);
}

namespace {

struct FiniteContext {
  ProductNilspace X;
  std::vector<std::vector<PointId>> gens;
  std::unique_ptr<FiniteTranslationGroup> H;
  std::vector<std::vector<bool>> in_level;  // in_level[i][e]: element e in H_i, i = 1..k+1
  std::vector<std::size_t> orbit;           // orbit index per point
  std::vector<PointId> orbit_rep;           // lex-least point per orbit
  std::vector<PointId> lex;                 // points in lexicographic order
  std::vector<std::size_t> lex_rank;

  FiniteContext(const CongruenceCandidate& c, Budget& budget) : X(c.base) {
    require_valid(c);
    int k = c.base.k;
    for (const auto& g : c.generators) gens.push_back(permutation_of(g, X));
    H = std::make_unique<FiniteTranslationGroup>(X, gens, budget);
    std::size_t n = H->order();
    in_level.assign(k + 2, std::vector<bool>(n, false));
    in_level[k + 1][0] = true;
    for (int i = 1; i <= k; ++i) {
      if (c.induced()) {
        for (std::size_t e = 0; e < n; ++e) in_level[i][e] = H->height(e) >= i;
        continue;
      }
      std::vector<std::vector<PointId>> sub;
      for (std::size_t g = 0; g < gens.size(); ++g)
        if (c.level(g) >= i) sub.push_back(gens[g]);
      FiniteTranslationGroup Hi(X, sub, budget);
      for (const auto& f : Hi.elements()) in_level[i][*H->find(f)] = true;
    }
    if (!c.induced()) check_filtration(k, budget);

    lex.resize(X.size());
    for (PointId p = 0; p < lex.size(); ++p) lex[p] = p;
    std::vector<Point> pts(X.size());
    for (PointId p = 0; p < pts.size(); ++p) pts[p] = X.point(p);
    std::sort(lex.begin(), lex.end(), [&](PointId a, PointId b) { return pts[a] < pts[b]; });
    lex_rank.resize(X.size());
    for (std::size_t r = 0; r < lex.size(); ++r) lex_rank[lex[r]] = r;

    orbit.assign(X.size(), SIZE_MAX);
    for (PointId p : lex) {
      if (orbit[p] != SIZE_MAX) continue;
      std::size_t id = orbit_rep.size();
      orbit_rep.push_back(p);
      for (const auto& f : H->elements()) orbit[f[p]] = id;
    }
  }

  void check_filtration(int k, Budget& budget) {
    std::size_t n = H->order();
    std::vector<PointId> comm(X.size());
    for (int i = 1; i <= k; ++i)
      for (int j = i; i + j <= k + 1; ++j)
        for (std::size_t a = 0; a < n; ++a) {
          if (!in_level[i][a]) continue;
          for (std::size_t b = 0; b < n; ++b) {
            if (!in_level[j][b]) continue;
            budget.charge(X.size());
            const auto& A = H->element(a);
            const auto& B = H->element(b);
            // a^-1 b^-1 a b, via the inverse permutations
            std::vector<PointId> Ai(X.size()), Bi(X.size());
            for (PointId p = 0; p < X.size(); ++p) Ai[A[p]] = p, Bi[B[p]] = p;
            for (PointId p = 0; p < X.size(); ++p) comm[p] = Ai[Bi[A[B[p]]]];
            auto e = H->find(comm);
            int ij = std::min(i + j, k + 1);
            if (!e || !in_level[ij][*e])
              fail(ErrorKind::Invalid, "declared filtration violates [H_" + std::to_string(i) + ", H_" +
                                           std::to_string(j) + "] <= H_" + std::to_string(i + j));
          }
        }
  }

  FtReport fiber_transitive(int k) const {
    FtReport rep;
    std::vector<std::vector<bool>> reach(k + 1, std::vector<bool>(X.size()));
    for (PointId x : lex) {
      for (int i = 0; i < k; ++i) {
        std::fill(reach[i].begin(), reach[i].end(), false);
        for (std::size_t e = 0; e < H->order(); ++e)
          if (in_level[i + 1][e]) reach[i][H->element(e)[x]] = true;
      }
      std::vector<PointId> ys;
      for (std::size_t e = 0; e < H->order(); ++e) ys.push_back(H->element(e)[x]);
      std::sort(ys.begin(), ys.end(), [&](PointId a, PointId b) { return lex_rank[a] < lex_rank[b]; });
      ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
      for (PointId y : ys)
        for (int i = k - 1; i >= 0; --i) {
          if (X.factor_key(x, i) != X.factor_key(y, i)) continue;
          if (!reach[i][y]) {
            rep.fiber_transitive = false;
            rep.witness = FtWitness{X.point(x), X.point(y), i};
            return rep;
          }
        }
    }
    return rep;
  }

  std::shared_ptr<MaterializedCubespace> image_cubes(int cap, Budget& budget) const {
    auto Q = std::make_shared<MaterializedCubespace>(orbit_rep.size(), X.step(), cap);
    std::vector<std::string> labels;
    for (PointId r : orbit_rep) labels.push_back(point_to_string(X.point(r)));
    Q->set_labels(labels);
    std::vector<PointId> img;
    for (int n = 0; n <= cap; ++n)
      for_each_cube(X, n, budget, [&](const PointId* q) {
        img.assign(q, q + (std::size_t(1) << n));
        for (auto& p : img) p = PointId(orbit[p]);
        Q->add(img);
        return true;
      });
    return Q;
  }
};

Element shift_of(const Translation& t, int i) {
  // degree-i component of a height >= i element, as a constant
  const auto& T = t.component(i);
  auto it = T.coeffs.find(MultiIndex(T.source.dim(), 0));
  if (it == T.coeffs.end()) return zero_element(T.target);
  return it->second;
}

AbelianInvariants finite_quotient_group(const Kinds& kinds, const std::vector<Element>& shifts) {
  std::size_t w = kinds.size();
  std::vector<std::vector<Integer>> rows;
  for (std::size_t c = 0; c < w; ++c) {
    std::vector<Integer> r(w, 0);
    r[c] = kinds[c].modulus;
    rows.push_back(r);
  }
  for (const auto& s : shifts) {
    std::vector<Integer> r(w);
    for (std::size_t c = 0; c < w; ++c) r[c] = s[c].get_num();
    rows.push_back(r);
  }
  return integer_quotient(rows, w);
}

std::vector<Element> finite_structure_shifts(const FiniteContext& ctx, int i) {
  std::set<Element> out;
  for (std::size_t e = 0; e < ctx.H->order(); ++e)
    if (ctx.in_level[i][e]) out.insert(shift_of(ctx.H->translation(e), i));
  return {out.begin(), out.end()};
}

}  // namespace

// ---------------------------------------------------------------- free base (declared in free_quotient.cpp)

FtReport free_fiber_transitive(const CongruenceCandidate& c, Budget& budget);
QuotientResult free_quotient(const CongruenceCandidate& c, Budget& budget, int dim_cap);

// ---------------------------------------------------------------- operations

FtReport check_fiber_transitive(const CongruenceCandidate& c, Budget& budget) {
  if (!c.base.is_finite()) return free_fiber_transitive(c, budget);
  FiniteContext ctx(c, budget);
  return ctx.fiber_transitive(c.base.k);
}

QuotientResult quotient(const CongruenceCandidate& c, Budget& budget, int dim_cap) {
  if (dim_cap < 0) dim_cap = c.base.k + 1;
  if (!c.base.is_finite()) return free_quotient(c, budget, dim_cap);
  FiniteContext ctx(c, budget);
  QuotientResult out;
  out.ft = ctx.fiber_transitive(c.base.k);
  if (!out.ft.fiber_transitive) fail(ErrorKind::Invalid, "candidate is not fiber-transitive");
  for (int i = 1; i <= c.base.k; ++i)
    out.structure_groups.push_back(finite_quotient_group(c.base.kinds_of_degree(i), finite_structure_shifts(ctx, i)));
  out.finite = true;
  for (PointId r : ctx.orbit_rep) out.representatives.push_back(ctx.X.point(r));
  out.cubespace = ctx.image_cubes(dim_cap, budget);
  return out;
}

std::shared_ptr<MaterializedCubespace> orbit_image_cubespace(const CongruenceCandidate& c, Budget& budget,
                                                             int dim_cap) {
  if (!c.base.is_finite()) fail(ErrorKind::Unsupported, "raw orbit images need a finite base");
  if (dim_cap < 0) dim_cap = c.base.k + 1;
  FiniteContext ctx(c, budget);
  return ctx.image_cubes(dim_cap, budget);
}

std::vector<Point> orbit_representatives(const CongruenceCandidate& c, Budget& budget) {
  if (!c.base.is_finite()) return quotient(c, budget, 0).representatives;
  FiniteContext ctx(c, budget);
  std::vector<Point> out;
  for (PointId r : ctx.orbit_rep) out.push_back(ctx.X.point(r));
  return out;
}

std::vector<Element> structure_shifts(const CongruenceCandidate& c, int i, Budget& budget) {
  if (!c.base.is_finite()) fail(ErrorKind::Unsupported, "structure shifts are enumerated on finite bases");
  FiniteContext ctx(c, budget);
  return finite_structure_shifts(ctx, i);
}

static bool lowest_component_constant(const Translation& t0) {
  Translation t = as_height(t0, 1);
  for (int i = 1; i <= t.space.k; ++i) {
    PolyMorphism T = t.component(i);
    T.normalize();
    if (T.coeffs.empty()) continue;
    for (const auto& [m, c] : T.coeffs)
      for (int e : m)
        if (e) return false;
    return true;
  }
  return true;
}

bool lowest_terms_constant(const CongruenceCandidate& c, Budget& budget) {
  require_valid(c);
  if (!c.base.is_finite()) {
    PolycyclicTranslationGroup G(c.base, c.generators, c.divisible, budget);
    return G.lowest_terms_constant();
  }
  FiniteContext ctx(c, budget);
  for (std::size_t e = 0; e < ctx.H->order(); ++e)
    if (!lowest_component_constant(ctx.H->translation(e))) return false;
  return true;
}

bool acts_freely(const CongruenceCandidate& c, Budget& budget) {
  if (!c.base.is_finite()) fail(ErrorKind::Unsupported, "direct freeness check needs a finite base");
  FiniteContext ctx(c, budget);
  for (std::size_t e = 1; e < ctx.H->order(); ++e)
    for (PointId p = 0; p < ctx.X.size(); ++p)
      if (ctx.H->element(e)[p] == p) return false;
  return true;
}

bool is_free_fiber_transitive(const CongruenceCandidate& c, Budget& budget) {
  if (!lowest_terms_constant(c, budget)) return false;
  if (c.base.is_finite() && !acts_freely(c, budget))
    fail(ErrorKind::Invalid, "constant lowest terms without a free action");
  return check_fiber_transitive(c, budget).fiber_transitive;
}

std::vector<Translation> fiber_transitive_closure_elements(const CongruenceCandidate& c, Budget& budget) {
  if (!c.base.is_finite()) fail(ErrorKind::Unsupported, "closure enumeration needs a finite base");
  FiniteContext ctx(c, budget);
  std::vector<Translation> out;
  for (auto& a : enumerate_translation_group(c.base, 1, budget)) {
    auto f = permutation_of(a, ctx.X);
    bool vertical = true;
    for (PointId p = 0; p < f.size() && vertical; ++p) vertical = ctx.orbit[f[p]] == ctx.orbit[p];
    if (vertical) out.push_back(std::move(a));
  }
  return out;
}

CongruenceCandidate fiber_transitive_closure(const CongruenceCandidate& c, Budget& budget) {
  auto elems = fiber_transitive_closure_elements(c, budget);
  ProductNilspace X(c.base);
  CongruenceCandidate out{c.base, {}, {}, {}};
  std::vector<std::vector<PointId>> gens;
  std::unique_ptr<FiniteTranslationGroup> G = std::make_unique<FiniteTranslationGroup>(X, gens, budget);
  for (const auto& a : elems) {
    auto f = permutation_of(a, X);
    if (G->contains(f)) continue;
    gens.push_back(f);
    out.generators.push_back(as_height(a, natural_height(a) > c.base.k ? 1 : natural_height(a)));
    G = std::make_unique<FiniteTranslationGroup>(X, gens, budget);
  }
  return out;
}

CongruenceCandidate factor_candidate(const CongruenceCandidate& c, int j) {
  if (j < 1 || j > c.base.k) fail(ErrorKind::Invalid, "factor index out of range");
  CongruenceCandidate out{c.base.prefix(j), {}, c.divisible, {}};
  for (std::size_t g = 0; g < c.generators.size(); ++g) {
    Translation t = c.generators[g];
    if (t.height > j) t = identity_translation(c.base, std::min(t.height, c.base.k));
    out.generators.push_back(eta(j, as_height(t, 1)));
    if (!c.levels.empty()) out.levels.push_back(std::min(c.levels[g], j));
  }
  return out;
}

bool filtrations_equivalent(const CongruenceCandidate& a, const CongruenceCandidate& b, Budget& budget, int dim_cap) {
  if (!(a.base == b.base)) fail(ErrorKind::DimensionMismatch, "filtrations on different spaces");
  if (!a.base.is_finite()) fail(ErrorKind::Unsupported, "filtration equivalence needs a finite base");
  if (dim_cap < 0) dim_cap = a.base.k + 1;
  FiniteContext ca(a, budget), cb(b, budget);
  int k = a.base.k;
  const ProductNilspace& X = ca.X;
  for (int n = 0; n <= dim_cap; ++n) {
    CubeList cubes = enumerate_cubes(X, n, budget);
    std::unordered_map<std::vector<PointId>, std::size_t, VecHash> index;
    for (std::size_t i = 0; i < cubes.count(); ++i) index[cubes.cube_vec(i)] = i;
    auto components = [&](const FiniteContext& ctx) {
      std::vector<std::size_t> parent(cubes.count());
      for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
      std::function<std::size_t(std::size_t)> root = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
      };
      std::vector<PointId> moved;
      for (int fd = 0; fd <= n; ++fd) {
        int codim = n - fd;
        int lvl = std::max(codim, 1);
        if (lvl > k) continue;
        for (const auto& F : faces(n, fd))
          for (std::size_t e = 1; e < ctx.H->order(); ++e) {
            if (!ctx.in_level[lvl][e]) continue;
            const auto& h = ctx.H->element(e);
            for (std::size_t i = 0; i < cubes.count(); ++i) {
              budget.charge();
              moved = cubes.cube_vec(i);
              for (Vertex v : F.vertices) moved[v] = h[moved[v]];
              auto it = index.find(moved);
              if (it == index.end()) fail(ErrorKind::Invalid, "face action left the cube set");
              parent[root(i)] = root(it->second);
            }
          }
      }
      std::vector<std::size_t> comp(cubes.count());
      for (std::size_t i = 0; i < comp.size(); ++i) comp[i] = root(i);
      return comp;
    };
    auto pa = components(ca), pb = components(cb);
    std::unordered_map<std::size_t, std::size_t> ab, ba;
    for (std::size_t i = 0; i < pa.size(); ++i) {
      auto [it1, ins1] = ab.emplace(pa[i], pb[i]);
      auto [it2, ins2] = ba.emplace(pb[i], pa[i]);
      if (it1->second != pb[i] || it2->second != pa[i]) return false;
    }
  }
  return true;
}

}  // namespace nilspace
