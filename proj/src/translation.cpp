#include "nilspace/translation.hpp"

#include <algorithm>
#include <functional>

#include "nilspace/error.hpp"

namespace nilspace {

static std::vector<std::size_t> degree_positions(const Signature& sig, int i) { return sig.slots_of_degree(i); }

Point Translation::act(const Point& x) const {
  if (x.size() != space.dim()) fail(ErrorKind::DimensionMismatch, "point length does not match the space");
  Point y = x;
  for (int i = height; i <= space.k; ++i) {
    const auto& T = component(i);
    auto pos = degree_positions(space, i);
    if (pos.empty()) continue;
    Element d = T.eval(truncate(space, x, i - height));
    for (std::size_t t = 0; t < pos.size(); ++t) y[pos[t]] = space.slots[pos[t]].kind.reduce(y[pos[t]] + d[t]);
  }
  return y;
}

bool Translation::is_identity() const {
  for (const auto& c : components) {
    PolyMorphism p = c;
    p.normalize();
    if (!p.coeffs.empty()) return false;
  }
  return true;
}

std::string Translation::to_string() const {
  std::string s = "height " + std::to_string(height) + ":";
  for (int i = height; i <= space.k; ++i) s += " T" + std::to_string(i) + "=" + component(i).to_string();
  return s;
}

Translation identity_translation(const Signature& space, int height) {
  Translation a{space, height, {}};
  for (int i = height; i <= space.k; ++i)
    a.components.push_back(zero_morphism(space.prefix(i - height), space.kinds_of_degree(i), i - height));
  return a;
}

Translation shift_translation(const Signature& space, int degree, const Element& c) {
  Translation a = identity_translation(space, degree);
  if (degree < 1 || degree > space.k) fail(ErrorKind::Invalid, "shift degree out of range");
  a.components[0] = constant_morphism(space.prefix(0), space.kinds_of_degree(degree), 0, c);
  return a;
}

Translation translation_from_displacement(const Signature& space, int height, const PointFunction& displacement) {
  Translation a{space, height, {}};
  for (int i = height; i <= space.k; ++i) {
    Signature src = space.prefix(i - height);
    auto pos = degree_positions(space, i);
    Kinds tgt = space.kinds_of_degree(i);
    PointFunction comp = [&](const Point& p) {
      Point x(space.dim(), Rational(0));
      std::size_t t = 0;
      for (std::size_t s = 0; s < space.dim(); ++s)
        if (space.slots[s].degree <= i - height) x[s] = p[t++];
      Point d = displacement(x);
      Element out;
      for (auto ps : pos) out.push_back(d[ps]);
      return out;
    };
    a.components.push_back(taylor_decompose(src, tgt, i - height, comp));
  }
  return a;
}

std::optional<std::string> translation_violation(const Translation& a) {
  if (a.height < 1) return "height must be at least 1";
  int expect = std::max(0, a.space.k - a.height + 1);
  if (static_cast<int>(a.components.size()) != expect) return "wrong number of components";
  for (int i = a.height; i <= a.space.k; ++i) {
    const auto& T = a.component(i);
    if (!(T.source == a.space.prefix(i - a.height))) return "component " + std::to_string(i) + " has the wrong source";
    if (!(T.target == a.space.kinds_of_degree(i))) return "component " + std::to_string(i) + " has the wrong target";
    if (T.degree != i - a.height) return "component " + std::to_string(i) + " has the wrong degree";
    if (auto v = morphism_violation(T)) return "component " + std::to_string(i) + ": " + *v;
  }
  return std::nullopt;
}

int natural_height(const Translation& a) {
  int h = a.space.k + 1;
  for (int i = a.height; i <= a.space.k; ++i) {
    PolyMorphism T = a.component(i);
    T.normalize();
    for (const auto& [m, c] : T.coeffs) h = std::min(h, i - filtered_degree(T.source, m));
  }
  return h;
}

Translation as_height(const Translation& a, int s) {
  if (s == a.height) return a;
  if (s < 1 || s > natural_height(a)) fail(ErrorKind::Invalid, "translation is not of height " + std::to_string(s));
  Translation out = identity_translation(a.space, s);
  for (int i = std::max(s, a.height); i <= a.space.k; ++i) {
    const auto& T = a.component(i);
    auto& R = out.components[i - s];
    std::size_t extra = R.source.dim() - std::min(R.source.dim(), T.source.dim());
    for (const auto& [m, c] : T.coeffs) {
      int fd = filtered_degree(T.source, m);
      if (fd > i - s) continue;  // vanishes by the height bound
      MultiIndex mm = m;
      if (mm.size() > R.source.dim()) {
        for (std::size_t t = R.source.dim(); t < mm.size(); ++t)
          if (mm[t]) fail(ErrorKind::Invalid, "translation is not of the requested height");
        mm.resize(R.source.dim());
      } else {
        mm.insert(mm.end(), extra, 0);
      }
      R.coeffs[mm] = c;
    }
    R.normalize();
  }
  return out;
}

bool same_map(const Translation& a, const Translation& b) {
  if (!(a.space == b.space)) return false;
  int s = std::min(a.height, b.height);
  Translation x = as_height(a, s), y = as_height(b, s);
  for (std::size_t i = 0; i < x.components.size(); ++i)
    if (!(x.components[i] == y.components[i])) return false;
  return true;
}

static Point displacement_of(const Signature& sig, const Point& x, const Point& y) {
  Point d(x.size());
  for (std::size_t s = 0; s < x.size(); ++s) d[s] = sig.slots[s].kind.reduce(y[s] - x[s]);
  return d;
}

Translation compose(const Translation& a, const Translation& b) {
  if (!(a.space == b.space)) fail(ErrorKind::DimensionMismatch, "translations act on different spaces");
  int s = std::min(a.height, b.height);
  const Signature& sig = a.space;
  return translation_from_displacement(sig, s, [&](const Point& x) { return displacement_of(sig, x, a.act(b.act(x))); });
}

static Point inverse_point(const Translation& a, const Point& y) {
  const Signature& sig = a.space;
  Point x = y;
  for (int i = a.height; i <= sig.k; ++i) {
    auto pos = degree_positions(sig, i);
    if (pos.empty()) continue;
    Element d = a.component(i).eval(truncate(sig, x, i - a.height));
    for (std::size_t t = 0; t < pos.size(); ++t) x[pos[t]] = sig.slots[pos[t]].kind.reduce(y[pos[t]] - d[t]);
  }
  return x;
}

Translation invert(const Translation& a) {
  const Signature& sig = a.space;
  return translation_from_displacement(sig, a.height,
                                       [&](const Point& y) { return displacement_of(sig, y, inverse_point(a, y)); });
}

Translation power(const Translation& a, const Integer& e) {
  Translation base = e < 0 ? invert(a) : a;
  Integer n = e < 0 ? Integer(-e) : e;
  Translation acc = identity_translation(a.space, a.height);
  while (n > 0) {
    if (n % 2 == 1) acc = compose(acc, base);
    n /= 2;
    if (n > 0) base = compose(base, base);
  }
  return acc;
}

Translation commutator(const Translation& a, const Translation& b) {
  return compose(compose(invert(a), invert(b)), compose(a, b));
}

Translation eta(int j, const Translation& a) {
  if (j < 0) fail(ErrorKind::Invalid, "negative factor index");
  Translation out{a.space.prefix(j), a.height, {}};
  for (int i = a.height; i <= std::min(j, a.space.k); ++i) out.components.push_back(a.component(i));
  if (out.space.k < a.height) out.components.clear();
  return out;
}

std::vector<PointId> permutation_of(const Translation& a, const ProductNilspace& space) {
  if (!(a.space == space.signature())) fail(ErrorKind::DimensionMismatch, "translation space mismatch");
  std::vector<PointId> f(space.size());
  for (PointId p = 0; p < space.size(); ++p) f[p] = space.index_of(a.act(space.point(p)));
  return f;
}

std::optional<Translation> translation_from_map(const ProductNilspace& space, const std::vector<PointId>& f, int s) {
  const Signature& sig = space.signature();
  if (f.size() != space.size()) fail(ErrorKind::DimensionMismatch, "map table size");
  PointFunction disp = [&](const Point& x) {
    Point y = space.point(f[space.index_of(reduce_point(sig, x))]);
    return displacement_of(sig, x, y);
  };
  // the displacement must vanish in degrees < s and depend only on the allowed coordinates
  for (PointId p = 0; p < space.size(); ++p) {
    Point x = space.point(p);
    Point d = disp(x);
    for (std::size_t t = 0; t < sig.dim(); ++t) {
      int i = sig.slots[t].degree;
      if (i < s && d[t] != 0) return std::nullopt;
    }
  }
  Translation a{sig, s, {}};
  for (int i = s; i <= sig.k; ++i) {
    Signature src = sig.prefix(i - s);
    auto pos = degree_positions(sig, i);
    PointFunction comp = [&](const Point& pp) {
      Point x(sig.dim(), Rational(0));
      std::size_t t = 0;
      for (std::size_t q = 0; q < sig.dim(); ++q)
        if (sig.slots[q].degree <= i - s) x[q] = pp[t++];
      Point d = disp(x);
      Element out;
      for (auto ps : pos) out.push_back(d[ps]);
      return out;
    };
    auto res = taylor_decompose_checked(src, sig.kinds_of_degree(i), i - s, comp);
    if (!res.morphism || !is_morphism(*res.morphism)) return std::nullopt;
    a.components.push_back(std::move(*res.morphism));
  }
  if (permutation_of(a, space) != f) return std::nullopt;
  return a;
}

// <q, f o q>_s with q in the low n bits and the s arrow bits on top.
static void build_arrow(const PointId* q, int n, int s, const std::vector<PointId>& f, std::vector<PointId>& out) {
  std::size_t len = std::size_t(1) << n;
  std::size_t top = (std::size_t(1) << s) - 1;
  out.resize(len << s);
  for (std::size_t w = 0; w <= top; ++w)
    for (std::size_t v = 0; v < len; ++v) out[(w << n) | v] = (w == top) ? f[q[v]] : q[v];
}

ArrowOutcome is_translation_bruteforce(const FiniteCubespace& space, const std::vector<PointId>& f, int s,
                                       Budget& budget) {
  if (f.size() != space.size()) fail(ErrorKind::DimensionMismatch, "map table size");
  if (s < 1) fail(ErrorKind::Invalid, "height must be at least 1");
  ArrowOutcome out;
  std::vector<PointId> arrow;
  for (int n = 0; n + s <= space.step() + 1; ++n) {
    bool done = for_each_cube(space, n, budget, [&](const PointId* q) {
      build_arrow(q, n, s, f, arrow);
      if (!space.is_cube(arrow.data(), n + s)) {
        out.ok = false;
        out.witness_cube.assign(q, q + (std::size_t(1) << n));
        return false;
      }
      return true;
    });
    if (!done) return out;
  }
  return out;
}

std::vector<std::vector<PointId>> all_translations_bruteforce(const FiniteCubespace& space, int s, Budget& budget) {
  std::size_t N = space.size();
  // every arrow constraint, filed under the largest point it involves
  struct Constraint {
    int n;
    std::vector<PointId> q;
  };
  std::vector<std::vector<Constraint>> by_max(N);
  for (int n = 0; n + s <= space.step() + 1; ++n) {
    CubeSet seen;
    for_each_cube(space, n, budget, [&](const PointId* q) {
      std::vector<PointId> c(q, q + (std::size_t(1) << n));
      if (!seen.insert(c).second) return true;
      PointId mx = *std::max_element(c.begin(), c.end());
      by_max[mx].push_back({n, std::move(c)});
      return true;
    });
  }
  std::vector<std::vector<PointId>> out;
  std::vector<PointId> f(N, 0);
  std::vector<PointId> arrow;
  std::function<void(std::size_t)> rec = [&](std::size_t p) {
    if (p == N) {
      out.push_back(f);
      return;
    }
    for (PointId y = 0; y < N; ++y) {
      budget.charge();
      f[p] = y;
      bool ok = true;
      for (const auto& c : by_max[p]) {
        build_arrow(c.q.data(), c.n, s, f, arrow);
        if (!space.is_cube(arrow.data(), c.n + s)) {
          ok = false;
          break;
        }
      }
      if (ok) rec(p + 1);
    }
  };
  rec(0);
  return out;
}

std::vector<Translation> enumerate_translation_group(const Signature& space, int s, Budget& budget) {
  if (!space.is_finite()) fail(ErrorKind::Unsupported, "translation enumeration needs a finite space");
  if (s < 1) fail(ErrorKind::Invalid, "height must be at least 1");
  std::vector<std::vector<PolyMorphism>> choices;
  for (int i = s; i <= space.k; ++i) {
    Kinds tgt = space.kinds_of_degree(i);
    if (tgt.empty()) {
      choices.push_back({zero_morphism(space.prefix(i - s), tgt, i - s)});
      continue;
    }
    choices.push_back(enumerate_hom(space.prefix(i - s), tgt, i - s, budget));
  }
  std::vector<Translation> out;
  std::vector<std::size_t> pick(choices.size(), 0);
  while (true) {
    Translation a{space, s, {}};
    for (std::size_t c = 0; c < choices.size(); ++c) a.components.push_back(choices[c][pick[c]]);
    out.push_back(std::move(a));
    budget.charge();
    std::size_t c = 0;
    while (c < pick.size() && ++pick[c] == choices[c].size()) pick[c++] = 0;
    if (c == pick.size()) break;
  }
  return out;
}

}  // namespace nilspace
