#include "nilspace/poly.hpp"

#include <algorithm>

#include "nilspace/error.hpp"

namespace nilspace {

int filtered_degree(const Signature& source, const MultiIndex& m) {
  if (m.size() != source.dim()) fail(ErrorKind::DimensionMismatch, "multi-index length");
  int d = 0;
  for (std::size_t s = 0; s < m.size(); ++s) {
    if (m[s] < 0) fail(ErrorKind::Invalid, "negative exponent");
    d += source.slots[s].degree * m[s];
  }
  return d;
}

std::vector<MultiIndex> monomials_up_to(const Signature& source, int t) {
  std::vector<MultiIndex> out;
  MultiIndex m(source.dim(), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t s, int left) {
    if (s == m.size()) {
      out.push_back(m);
      return;
    }
    int deg = source.slots[s].degree;
    for (int e = 0; e * deg <= left; ++e) {
      m[s] = e;
      rec(s + 1, left - e * deg);
    }
    m[s] = 0;
  };
  if (t >= 0) rec(0, t);
  std::stable_sort(out.begin(), out.end(), [&](const MultiIndex& a, const MultiIndex& b) {
    int da = filtered_degree(source, a), db = filtered_degree(source, b);
    if (da != db) return da < db;
    return a < b;
  });
  return out;
}

Rational monomial_value(const MultiIndex& m, const Point& x) {
  Rational r(1);
  for (std::size_t s = 0; s < m.size(); ++s)
    if (m[s]) r *= binomial(x[s], static_cast<unsigned>(m[s]));
  return r;
}

static bool touches_continuous(const Signature& src, const MultiIndex& m) {
  for (std::size_t s = 0; s < m.size(); ++s)
    if (m[s] && !src.slots[s].kind.discrete()) return true;
  return false;
}

// Torus coefficients on monomials in continuous variables stay exact real lifts.
static Rational reduce_coeff(const CoordKind& kind, Rational a, bool continuous_monomial) {
  a.canonicalize();
  if (kind.ring == Ring::Torus && continuous_monomial) return a;
  return kind.reduce(a);
}

void PolyMorphism::normalize() {
  for (auto it = coeffs.begin(); it != coeffs.end();) {
    if (it->second.size() != target.size()) fail(ErrorKind::DimensionMismatch, "coefficient rank");
    bool cont = touches_continuous(source, it->first);
    for (std::size_t c = 0; c < target.size(); ++c) it->second[c] = reduce_coeff(target[c], it->second[c], cont);
    if (is_zero(it->second)) it = coeffs.erase(it);
    else ++it;
  }
}

Element PolyMorphism::eval(const Point& x) const {
  if (x.size() != source.dim()) fail(ErrorKind::DimensionMismatch, "point length does not match source");
  Point y = reduce_point(source, x);
  Element acc = eval_lifted(y);
  return reduce(target, acc);
}

Element PolyMorphism::eval_lifted(const Point& x) const {
  if (x.size() != source.dim()) fail(ErrorKind::DimensionMismatch, "point length does not match source");
  Element acc(target.size(), Rational(0));
  for (const auto& [m, a] : coeffs) {
    Rational mv = monomial_value(m, x);
    if (mv == 0) continue;
    for (std::size_t c = 0; c < target.size(); ++c) acc[c] += a[c] * mv;
  }
  return acc;
}

bool PolyMorphism::operator==(const PolyMorphism& o) const {
  PolyMorphism a = *this, b = o;
  a.normalize();
  b.normalize();
  return a.source == b.source && a.target == b.target && a.degree == b.degree && a.coeffs == b.coeffs;
}

std::string PolyMorphism::to_string() const {
  std::string s;
  for (const auto& [m, a] : coeffs) {
    if (!s.empty()) s += " + ";
    s += point_to_string(a) + "*C(x,[";
    for (std::size_t i = 0; i < m.size(); ++i) s += (i ? "," : "") + std::to_string(m[i]);
    s += "])";
  }
  return s.empty() ? "0" : s;
}

PolyMorphism zero_morphism(const Signature& source, const Kinds& target, int degree) {
  return PolyMorphism{source, target, degree, {}};
}

PolyMorphism constant_morphism(const Signature& source, const Kinds& target, int degree, const Element& c) {
  PolyMorphism p{source, target, degree, {}};
  p.coeffs[MultiIndex(source.dim(), 0)] = c;
  p.normalize();
  return p;
}

std::vector<Point> box_points(std::size_t dim, int side) {
  std::vector<Point> out;
  std::vector<long> x(dim, 0);
  while (true) {
    Point p(dim);
    for (std::size_t i = 0; i < dim; ++i) p[i] = Rational(x[i]);
    out.push_back(p);
    std::size_t i = 0;
    while (i < dim && ++x[i] == side) x[i++] = 0;
    if (i == dim) break;
  }
  return out;
}

static std::optional<std::string> periodicity_violation(const PolyMorphism& phi) {
  const Signature& src = phi.source;
  int side = std::max(phi.degree, 0) + 1;
  auto pts = box_points(src.dim(), side);
  for (std::size_t s = 0; s < src.dim(); ++s) {
    if (!src.slots[s].kind.finite()) continue;
    Rational m(src.slots[s].kind.modulus);
    // difference polynomial, computed exactly on lifted coefficients
    PointFunction diff = [&](const Point& x) {
      Point y = x;
      y[s] += m;
      Element a = phi.eval_lifted(y), b = phi.eval_lifted(x);
      for (std::size_t c = 0; c < a.size(); ++c) a[c] -= b[c];
      return a;
    };
    std::map<Point, Element> cache;
    for (const auto& p : pts) cache[p] = diff(p);
    for (const auto& m_idx : monomials_up_to(src, phi.degree)) {
      Element acc(phi.target.size(), Rational(0));
      // forward difference at 0
      std::vector<int> j(m_idx.size(), 0);
      while (true) {
        Rational coef(1);
        int sign = 0;
        Point jp(j.size());
        for (std::size_t t = 0; t < j.size(); ++t) {
          coef *= Rational(binomial(Integer(m_idx[t]), static_cast<unsigned>(j[t])));
          sign += m_idx[t] - j[t];
          jp[t] = Rational(j[t]);
        }
        const Element& v = cache.at(jp);
        for (std::size_t c = 0; c < acc.size(); ++c) acc[c] += (sign % 2 ? -coef : coef) * v[c];
        std::size_t t = 0;
        while (t < j.size() && ++j[t] > m_idx[t]) j[t++] = 0;
        if (t == j.size()) break;
      }
      bool cont = touches_continuous(src, m_idx);
      for (std::size_t c = 0; c < acc.size(); ++c) {
        bool zero = cont ? acc[c] == 0 : phi.target[c].reduce(acc[c]) == 0;
        if (!zero)
          return "not periodic in residue slot " + std::to_string(s) + " (well-definedness on Z_" +
                 src.slots[s].kind.modulus.get_str() + ")";
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> morphism_violation(const PolyMorphism& phi) {
  if (phi.degree < 0) return "negative target degree";
  bool discrete_target = std::all_of(phi.target.begin(), phi.target.end(),
                                     [](const CoordKind& c) { return c.discrete(); });
  for (const auto& [m, a] : phi.coeffs) {
    if (m.size() != phi.source.dim()) return "multi-index length does not match the source";
    if (a.size() != phi.target.size()) return "coefficient rank does not match the target";
    int fd = filtered_degree(phi.source, m);
    if (fd > phi.degree && !is_zero(a))
      return "filtered degree " + std::to_string(fd) + " exceeds " + std::to_string(phi.degree);
    bool cont = touches_continuous(phi.source, m);
    for (std::size_t c = 0; c < a.size(); ++c) {
      if (a[c] == 0) continue;
      if (cont && phi.target[c].discrete()) return "discrete target depends on a continuous coordinate";
      if (!(phi.target[c].ring == Ring::Torus && cont) && !phi.target[c].member(a[c]))
        return "coefficient " + nilspace::to_string(a[c]) + " is not in the target group";
    }
  }
  (void)discrete_target;
  return periodicity_violation(phi);
}

TaylorOutcome taylor_decompose_checked(const Signature& source, const Kinds& target, int t,
                                       const PointFunction& f, int side) {
  if (t < 0) fail(ErrorKind::Invalid, "negative degree");
  if (side < 0) side = t + 2;
  if (side < t + 1) fail(ErrorKind::DimensionMismatch, "box side must be at least t+1");
  bool torus = std::any_of(target.begin(), target.end(), [](const CoordKind& c) { return c.ring == Ring::Torus; });
  if (torus && source.has_continuous())
    fail(ErrorKind::Unsupported, "torus-valued decomposition over continuous coordinates");
  std::map<Point, Element> cache;
  auto value = [&](const Point& p) -> const Element& {
    auto it = cache.find(p);
    if (it != cache.end()) return it->second;
    Element v = f(p);
    if (v.size() != target.size()) fail(ErrorKind::DimensionMismatch, "function value rank");
    return cache.emplace(p, reduce(target, v)).first->second;
  };
  PolyMorphism P{source, target, t, {}};
  bool discrete_target = std::all_of(target.begin(), target.end(), [](const CoordKind& c) { return c.discrete(); });
  for (const auto& m : monomials_up_to(source, t)) {
    if (discrete_target && touches_continuous(source, m)) continue;
    Element acc(target.size(), Rational(0));
    std::vector<int> j(m.size(), 0);
    while (true) {
      Rational coef(1);
      int sign = 0;
      Point jp(j.size());
      for (std::size_t s = 0; s < j.size(); ++s) {
        coef *= Rational(binomial(Integer(m[s]), static_cast<unsigned>(j[s])));
        sign += m[s] - j[s];
        jp[s] = Rational(j[s]);
      }
      const Element& v = value(jp);
      for (std::size_t c = 0; c < acc.size(); ++c) acc[c] += (sign % 2 ? -coef : coef) * v[c];
      std::size_t s = 0;
      while (s < j.size() && ++j[s] > m[s]) j[s++] = 0;
      if (s == j.size()) break;
    }
    P.coeffs[m] = acc;
  }
  P.normalize();
  TaylorOutcome out;
  for (const auto& p : box_points(source.dim(), side)) {
    Element fv = value(p);
    Element pv = reduce(target, P.eval_lifted(p));
    if (fv != pv) {
      out.mismatch = p;
      out.residual = sub(target, fv, pv);
      return out;
    }
  }
  out.morphism = std::move(P);
  return out;
}

PolyMorphism taylor_decompose(const Signature& source, const Kinds& target, int t, const PointFunction& f,
                              int side) {
  auto out = taylor_decompose_checked(source, target, t, f, side);
  if (!out.morphism)
    fail(ErrorKind::NotPolynomial, "round trip fails at " + point_to_string(out.mismatch) + " with residual " +
                                       point_to_string(out.residual));
  return std::move(*out.morphism);
}

PolyMorphism taylor_decompose_table(const Signature& source, const Kinds& target, int t, int side,
                                    const std::vector<Element>& values) {
  std::size_t expect = 1;
  for (std::size_t i = 0; i < source.dim(); ++i) expect *= static_cast<std::size_t>(side);
  if (values.size() != expect) fail(ErrorKind::DimensionMismatch, "table size does not match the box");
  PointFunction f = [&](const Point& p) {
    std::size_t idx = 0, mult = 1;
    for (std::size_t i = 0; i < p.size(); ++i) {
      long x = p[i].get_num().get_si();
      if (x < 0 || x >= side) fail(ErrorKind::DimensionMismatch, "point outside the table box");
      idx += mult * static_cast<std::size_t>(x);
      mult *= static_cast<std::size_t>(side);
    }
    return values[idx];
  };
  return taylor_decompose(source, target, t, f, side);
}

PolyMorphism lift_morphism(const PolyMorphism& phi) {
  PolyMorphism out = phi;
  out.normalize();
  for (auto& k : out.target) k = k.lifted();
  return out;
}

BruteForceOutcome is_morphism_bruteforce(const ProductNilspace& domain, const std::vector<Element>& f,
                                         const Kinds& target, int t, Budget& budget) {
  if (f.size() != domain.size()) fail(ErrorKind::DimensionMismatch, "function table size");
  int n = t + 1;
  std::size_t len = std::size_t(1) << n;
  BruteForceOutcome out;
  bool finite = std::all_of(target.begin(), target.end(), [](const CoordKind& c) { return c.finite(); });
  if (finite) {
    std::size_t r = target.size();
    std::vector<std::int64_t> flat(f.size() * r), mods(r);
    for (std::size_t c = 0; c < r; ++c) mods[c] = target[c].modulus.get_si();
    for (std::size_t p = 0; p < f.size(); ++p)
      for (std::size_t c = 0; c < r; ++c) flat[p * r + c] = mod_floor(f[p].at(c), target[c].modulus).get_si();
    std::vector<std::int64_t> vals(len);
    for_each_cube(domain, n, budget, [&](const PointId* q) {
      for (std::size_t c = 0; c < r; ++c) {
        for (std::size_t v = 0; v < len; ++v) vals[v] = flat[q[v] * r + c];
        if (!gray_cube(t, n, vals.data(), mods[c])) {
          out.ok = false;
          out.witness.assign(q, q + len);
          return false;
        }
      }
      return true;
    });
    return out;
  }
  CubeMap<Element> img{n, std::vector<Element>(len)};
  for_each_cube(domain, n, budget, [&](const PointId* q) {
    for (std::size_t v = 0; v < len; ++v) img.values[v] = f[q[v]];
    if (!is_cube_degree_k(target, t, img)) {
      out.ok = false;
      out.witness.assign(q, q + len);
      return false;
    }
    return true;
  });
  return out;
}

}  // namespace nilspace

namespace nilspace {

std::vector<Element> function_table(const PolyMorphism& phi, const ProductNilspace& domain) {
  std::vector<Element> out;
  out.reserve(domain.size());
  for (PointId p = 0; p < domain.size(); ++p) out.push_back(phi.eval(domain.point(p)));
  return out;
}

std::vector<PolyMorphism> enumerate_hom(const Signature& source, const Kinds& target, int t, Budget& budget) {
  for (const auto& c : target)
    if (!c.finite()) fail(ErrorKind::Unsupported, "hom enumeration needs a finite target");
  if (!source.is_finite()) fail(ErrorKind::Unsupported, "hom enumeration needs a finite source");
  auto monos = monomials_up_to(source, t);
  // each monomial carries one coefficient per target coordinate
  std::vector<std::pair<std::size_t, std::size_t>> digits;
  for (std::size_t i = 0; i < monos.size(); ++i)
    for (std::size_t c = 0; c < target.size(); ++c) digits.push_back({i, c});
  std::vector<long> radix;
  for (auto [i, c] : digits) radix.push_back(target[c].modulus.get_si());
  ProductNilspace domain(source);
  std::vector<long> val(digits.size(), 0);
  std::map<std::vector<Element>, PolyMorphism> seen;
  std::vector<PolyMorphism> out;
  while (true) {
    budget.charge();
    PolyMorphism p{source, target, t, {}};
    for (std::size_t d = 0; d < digits.size(); ++d) {
      auto [i, c] = digits[d];
      auto& e = p.coeffs[monos[i]];
      if (e.empty()) e = zero_element(target);
      e[c] = Rational(val[d]);
    }
    p.normalize();
    if (is_morphism(p)) {
      auto table = function_table(p, domain);
      if (!seen.count(table)) {
        seen.emplace(table, p);
        out.push_back(p);
      }
    }
    std::size_t d = 0;
    while (d < val.size() && ++val[d] == radix[d]) val[d++] = 0;
    if (d == val.size()) break;
  }
  return out;
}

}  // namespace nilspace
