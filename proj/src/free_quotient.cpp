#include <algorithm>
#include <map>
#include <set>

#include "nilspace/congruence.hpp"
#include "nilspace/error.hpp"

namespace nilspace {

namespace {

struct FreeContext {
  const CongruenceCandidate& c;
  int k;
  PolycyclicTranslationGroup H;
  std::vector<std::unique_ptr<PolycyclicTranslationGroup>> levels;  // declared H_i, index i

  FreeContext(const CongruenceCandidate& cand, Budget& budget)
      : c(cand), k(cand.base.k), H(cand.base, cand.generators, cand.divisible, budget) {
    if (!c.base.is_free()) fail(ErrorKind::Unsupported, "infinite bases must be free signatures");
    if (c.induced()) return;
    levels.resize(k + 2);
    for (int i = 1; i <= k; ++i) {
      std::vector<Translation> gens;
      std::vector<bool> div;
      for (std::size_t g = 0; g < c.generators.size(); ++g)
        if (c.level(g) >= i) {
          gens.push_back(c.generators[g]);
          div.push_back(c.is_divisible(g));
        }
      levels[i] = std::make_unique<PolycyclicTranslationGroup>(c.base, gens, div, budget);
    }
    for (std::size_t a = 0; a < c.generators.size(); ++a)
      for (std::size_t b = a + 1; b < c.generators.size(); ++b) {
        if (c.is_divisible(a) || c.is_divisible(b)) continue;
        budget.charge();
        Translation t = commutator(c.generators[a], c.generators[b]);
        int l = c.level(a) + c.level(b);
        bool ok = l > k ? same_map(t, identity_translation(c.base)) : levels[l]->contains(t);
        if (!ok)
          fail(ErrorKind::Invalid, "declared filtration violates the commutator condition for generators " +
                                       std::to_string(a) + " and " + std::to_string(b));
      }
  }

  bool in_level(const Translation& t, int i) const {
    if (c.induced()) return natural_height(t) >= i;
    return levels[i]->contains(t);
  }

  Lattice level_constants(int i) const { return c.induced() ? H.constants(i) : levels[i]->constants(i); }

  Vec eval_top(const Vec& v, const Point& x) const {
    std::size_t w = H.width(k);
    Point low = truncate(c.base, x, k - 1);
    Vec out(w, Rational(0));
    const auto& monos = H.monomials(k);
    for (std::size_t m = 0; m < monos.size(); ++m) {
      Rational mv = monomial_value(monos[m], low);
      if (mv == 0) continue;
      for (std::size_t t = 0; t < w; ++t) out[t] += v[m * w + t] * mv;
    }
    return out;
  }

  std::vector<Point> grid() const {
    std::vector<std::vector<Rational>> values;
    for (const auto& s : c.base.slots) {
      std::vector<Rational> v;
      if (s.degree == k) {
        v.push_back(0);
      } else {
        for (int a = 0; a <= k; ++a) v.push_back(a);
        if (!s.kind.discrete())
          for (int q = 2; q <= k + 1; ++q) v.push_back(Rational(1, q));
      }
      values.push_back(v);
    }
    std::vector<Point> out;
    Point x(values.size());
    std::function<void(std::size_t)> rec = [&](std::size_t s) {
      if (s == values.size()) {
        out.push_back(x);
        return;
      }
      for (const auto& a : values[s]) {
        x[s] = a;
        rec(s + 1);
      }
    };
    rec(0);
    std::sort(out.begin(), out.end());
    return out;
  }

  bool continuous_monomial(const MultiIndex& m) const {
    for (std::size_t s = 0; s < m.size(); ++s)
      if (m[s] && !c.base.slots[s].kind.discrete()) return true;
    return false;
  }

  FtReport fiber_transitive() const {
    FtReport rep;
    if (!H.lower_layers_constant())
      fail(ErrorKind::Unsupported, "fiber-transitivity on infinite bases needs constant lower layers");
    bool top_constant = H.layer_constant(k);
    Point zero(c.base.dim(), Rational(0));
    for (int j = 1; j < k; ++j)
      for (const auto& r : H.reps(j)) {
        if (in_level(r, j)) continue;
        if (!top_constant) fail(ErrorKind::Unsupported, "lower layer outside its filtration level");
        rep.fiber_transitive = false;
        rep.witness = FtWitness{zero, r.act(zero), j - 1};
        return rep;
      }
    if (H.width(k) == 0) return rep;

    Lattice C = level_constants(k);
    Lattice Cdiv(C.dim());
    for (const auto& v : C.rows()) Cdiv.add_divisible(v);
    for (const auto& v : C.divisible()) Cdiv.add_divisible(v);

    struct TopPoly {
      Vec v;
      bool divisible;
    };
    std::vector<TopPoly> polys;
    for (std::size_t g = 0; g < c.generators.size(); ++g) {
      bool top_only = true;
      for (int j = 1; j < k && top_only; ++j) top_only = is_zero_vec(H.coeff_vector(j, c.generators[g]));
      if (top_only) polys.push_back({H.coeff_vector(k, c.generators[g]), c.is_divisible(g)});
    }
    for (const auto& r : H.lattice(k).rows()) polys.push_back({r, false});
    for (const auto& r : H.lattice(k).divisible()) polys.push_back({r, true});

    std::size_t w = H.width(k);
    const auto& monos = H.monomials(k);
    auto grid_points = grid();
    for (const auto& P : polys) {
      bool ok = true;
      for (std::size_t m = 0; m < monos.size() && ok; ++m) {
        Vec a(P.v.begin() + m * w, P.v.begin() + (m + 1) * w);
        if (is_zero_vec(a)) continue;
        ok = (P.divisible || continuous_monomial(monos[m])) ? Cdiv.contains(a) : C.contains(a);
      }
      if (ok) continue;
      rep.fiber_transitive = false;
      auto pos = c.base.slots_of_degree(k);
      for (const auto& x : grid_points) {
        Vec val = eval_top(P.v, x);
        if (P.divisible ? Cdiv.contains(val) : C.contains(val)) continue;
        Point y = x;
        for (std::size_t t = 0; t < w; ++t) y[pos[t]] += val[t];
        rep.witness = FtWitness{x, y, k - 1};
        break;
      }
      return rep;
    }
    return rep;
  }

  AbelianInvariants structure_group(int i) const {
    Kinds kinds = c.base.kinds_of_degree(i);
    Lattice L = level_constants(i);
    std::vector<std::size_t> zc, qc;
    for (std::size_t t = 0; t < kinds.size(); ++t) (kinds[t].discrete() ? zc : qc).push_back(t);
    auto supported_on = [](const Vec& v, const std::vector<std::size_t>& cols) {
      for (std::size_t t = 0; t < v.size(); ++t)
        if (v[t] != 0 && std::find(cols.begin(), cols.end(), t) == cols.end()) return false;
      return true;
    };
    std::vector<std::vector<Integer>> zrows;
    std::size_t qlat = 0;
    for (const auto& v : L.rows()) {
      if (supported_on(v, zc)) {
        std::vector<Integer> r;
        for (auto t : zc) r.push_back(v[t].get_num());
        zrows.push_back(r);
      } else if (supported_on(v, qc)) {
        ++qlat;
      } else {
        fail(ErrorKind::Unsupported, "structure group of a non-split lattice");
      }
    }
    for (const auto& v : L.divisible())
      if (!supported_on(v, qc)) fail(ErrorKind::Unsupported, "structure group of a non-split lattice");
    AbelianInvariants out = integer_quotient(zrows, zc.size());
    out.torus_rank = int(qlat);
    out.rational_rank = int(qc.size() - L.divisible().size() - qlat);
    return out;
  }
};

Integer exponent_of(const AbelianInvariants& a) {
  Integer e = 1;
  for (const auto& t : a.torsion) e = lcm(e, t);
  return e;
}

}  // namespace

FtReport free_fiber_transitive(const CongruenceCandidate& c, Budget& budget) {
  if (auto v = candidate_violation(c)) fail(ErrorKind::Invalid, *v);
  FreeContext ctx(c, budget);
  return ctx.fiber_transitive();
}

QuotientResult free_quotient(const CongruenceCandidate& c, Budget& budget, int dim_cap) {
  if (auto v = candidate_violation(c)) fail(ErrorKind::Invalid, *v);
  FreeContext ctx(c, budget);
  QuotientResult out;
  out.ft = ctx.fiber_transitive();
  if (!out.ft.fiber_transitive) fail(ErrorKind::Invalid, "candidate is not fiber-transitive");
  int k = c.base.k;
  out.finite = true;
  Integer P = 1;
  for (int i = 1; i <= k; ++i) {
    out.structure_groups.push_back(ctx.structure_group(i));
    out.finite = out.finite && out.structure_groups.back().finite();
    P = lcm(P, exponent_of(out.structure_groups.back()));
  }
  if (!out.finite) return out;

  std::size_t d = c.base.dim();
  auto rep_of = [&](const Point& x) { return ctx.H.representative(x); };
  // The quotient is a quotient of F_P = prod D_i(Z_P) once representatives are P-periodic.
  for (int attempt = 1; attempt <= 4; ++attempt) {
    Integer Q = P * attempt;
    if (!Q.fits_slong_p() || Q.get_si() > 64) fail(ErrorKind::BudgetExceeded, "realization period too large");
    long q = Q.get_si();
    bool periodic = true;
    for (const auto& x : box_points(d, int(q))) {
      budget.charge(d);
      Point rx = rep_of(x);
      for (std::size_t s = 0; s < d && periodic; ++s) {
        Point xs = x;
        xs[s] += q;
        periodic = rep_of(xs) == rx;
      }
      if (!periodic) break;
    }
    if (!periodic) continue;

    std::vector<Slot> slots;
    for (const auto& s : c.base.slots) slots.push_back({s.degree, CoordKind::residues(q)});
    Signature fp = Signature::from_slots(k, slots);
    ProductNilspace FP(fp);
    std::map<Point, PointId> ids;
    std::vector<PointId> class_of(FP.size());
    for (PointId p = 0; p < FP.size(); ++p) {
      Point r = rep_of(FP.point(p));
      auto it = ids.find(r);
      if (it == ids.end()) it = ids.emplace(r, PointId(ids.size())).first;
      class_of[p] = it->second;
    }
    // relabel in lexicographic order of representatives
    std::vector<PointId> relabel(ids.size());
    PointId next = 0;
    for (auto& [r, id] : ids) {
      relabel[id] = next++;
      out.representatives.push_back(r);
    }
    for (auto& cl : class_of) cl = relabel[cl];
    auto Qs = std::make_shared<MaterializedCubespace>(ids.size(), k, dim_cap);
    std::vector<std::string> labels;
    for (const auto& r : out.representatives) labels.push_back(point_to_string(r));
    Qs->set_labels(labels);
    std::vector<PointId> img;
    for (int n = 0; n <= dim_cap; ++n)
      for_each_cube(FP, n, budget, [&](const PointId* cq) {
        img.assign(cq, cq + (std::size_t(1) << n));
        for (auto& p : img) p = class_of[p];
        Qs->add(img);
        return true;
      });
    out.cubespace = Qs;
    out.period = int(q);
    return out;
  }
  fail(ErrorKind::Unsupported, "orbit representatives are not periodic with the structure-group period");
}

ClosureEmbedding continuous_closure_embed(const CongruenceCandidate& c, Budget& budget, int sample_side) {
  if (c.base.is_finite() || !c.base.is_free()) fail(ErrorKind::Invalid, "continuous closure needs a free base");
  ClosureEmbedding out;
  out.closure = c.base.continuous_closure();
  for (const auto& g : c.generators) {
    Translation t = g;
    t.space = out.closure;
    for (std::size_t i = 0; i < t.components.size(); ++i) {
      int deg = t.height + int(i);
      t.components[i].source = out.closure.prefix(deg - t.height);
      t.components[i].target = out.closure.kinds_of_degree(deg);
    }
    out.iota.push_back(t);
  }
  auto q = quotient(c, budget, 0);
  PolycyclicTranslationGroup H(c.base, c.generators, c.divisible, budget);
  PolycyclicTranslationGroup I(out.closure, out.iota, c.divisible, budget);
  auto box = box_points(c.base.dim(), sample_side);
  out.representatives = q.representatives;
  if (!q.finite) {
    // infinitely many orbits: use the distinct representatives of the sample box
    std::set<Point> reps;
    for (const auto& x : box) reps.insert(H.representative(x));
    out.representatives.assign(reps.begin(), reps.end());
  }
  std::set<Point> seen;
  for (const auto& r : out.representatives) {
    out.images.push_back(I.representative(r));
    if (!seen.insert(out.images.back()).second) out.injective = false;
  }
  std::vector<Point> rh, ri;
  for (const auto& x : box) {
    budget.charge();
    rh.push_back(H.representative(x));
    ri.push_back(I.representative(x));
  }
  for (std::size_t a = 0; a < box.size(); ++a)
    for (std::size_t b = a + 1; b < box.size(); ++b)
      if ((rh[a] == rh[b]) != (ri[a] == ri[b])) out.sample_agrees = false;
  return out;
}

}  // namespace nilspace
