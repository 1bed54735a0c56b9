#include <algorithm>

#include "nilspace/congruence.hpp"
#include "nilspace/error.hpp"

namespace nilspace {

namespace {

void axpy(Vec& y, const Rational& a, const Vec& x) {
  for (std::size_t i = 0; i < y.size(); ++i)
    if (x[i] != 0) y[i] += a * x[i];
}

Translation conjugate(const Translation& a, const Translation& b) {  // b^-1 a b
  return compose(invert(b), compose(a, b));
}

}  // namespace

PolycyclicTranslationGroup::PolycyclicTranslationGroup(const Signature& base, const std::vector<Translation>& gens,
                                                       const std::vector<bool>& divisible, Budget& budget)
    : base_(base), budget_(&budget) {
  int k = base.k;
  if (k < 1) fail(ErrorKind::Invalid, "base must have step at least 1");
  monos_.resize(k + 1);
  width_.assign(k + 1, 0);
  reps_.resize(k + 1);
  lat_.resize(k + 1);
  for (int j = 1; j <= k; ++j) {
    monos_[j] = monomials_up_to(base.prefix(j - 1), j - 1);
    width_[j] = base.kinds_of_degree(j).size();
    lat_[j] = Lattice(coeff_dim(j));
  }

  std::vector<std::pair<Translation, bool>> queue;
  for (std::size_t g = 0; g < gens.size(); ++g) {
    if (!(gens[g].space == base)) fail(ErrorKind::DimensionMismatch, "generator acts on a different space");
    bool div = g < divisible.size() && divisible[g];
    queue.push_back({as_height(gens[g], 1), div});
  }
  std::size_t inserted = 0;
  std::size_t qi = 0;
  auto drain = [&]() {
    while (qi < queue.size()) {
      auto [g, div] = queue[qi++];
      budget.charge();
      if (div) {
        for (int j = 1; j < k; ++j)
          if (!is_zero_vec(coeff_vector(j, g)))
            fail(ErrorKind::Unsupported, "divisible generators must act on the top degree only");
        Vec v = coeff_vector(k, g);
        auto kinds = base.kinds_of_degree(k);
        for (std::size_t i = 0; i < v.size(); ++i)
          if (v[i] != 0 && kinds[i % width_[k]].discrete())
            fail(ErrorKind::Invalid, "divisible generator moves a discrete coordinate");
        if (lat_[k].add_divisible(v)) ++inserted;
        continue;
      }
      int layer = 0;
      Translation r = sift(g, layer);
      if (layer == 0) continue;
      ++inserted;
      if (layer < k)
        insert_lower(layer, r, queue);
      else
        lat_[k].add(coeff_vector(k, r));
    }
  };
  drain();
  // conjugates of the presentation must sift through it
  while (true) {
    std::size_t before = inserted;
    std::vector<Translation> lower;
    for (int j = 1; j < k; ++j) lower.insert(lower.end(), reps_[j].begin(), reps_[j].end());
    std::vector<Translation> top;
    for (const auto& r : lat_[k].rows()) top.push_back(top_element(r));
    for (const auto& b : lower) {
      Translation bi = invert(b);
      for (const auto& a : lower) {
        queue.push_back({conjugate(a, b), false});
        queue.push_back({conjugate(a, bi), false});
      }
      for (const auto& t : top) {
        queue.push_back({conjugate(t, b), false});
        queue.push_back({conjugate(t, bi), false});
        queue.push_back({conjugate(b, t), false});
        queue.push_back({conjugate(b, invert(t)), false});
      }
      for (const auto& d : lat_[k].divisible()) {
        Translation e = top_element(d);
        queue.push_back({conjugate(e, b), true});
        queue.push_back({conjugate(e, bi), true});
      }
    }
    drain();
    if (inserted == before) break;
  }
}

Vec PolycyclicTranslationGroup::coeff_vector(int j, const Translation& g) const {
  Vec v(coeff_dim(j), Rational(0));
  if (width_[j] == 0) return v;
  Translation h = g.height == 1 ? g : as_height(g, 1);
  const auto& T = h.component(j);
  for (const auto& [m, c] : T.coeffs) {
    auto it = std::find(monos_[j].begin(), monos_[j].end(), m);
    if (it == monos_[j].end()) fail(ErrorKind::Invalid, "coefficient outside the degree bound");
    std::size_t base_idx = std::size_t(it - monos_[j].begin()) * width_[j];
    for (std::size_t t = 0; t < width_[j]; ++t) v[base_idx + t] = c[t];
  }
  return v;
}

Translation PolycyclicTranslationGroup::top_element(const Vec& v) const {
  int k = base_.k;
  Translation a = identity_translation(base_, 1);
  auto& T = a.components[k - 1];
  for (std::size_t m = 0; m < monos_[k].size(); ++m) {
    Element e(v.begin() + m * width_[k], v.begin() + (m + 1) * width_[k]);
    if (!is_zero_vec(e)) T.coeffs[monos_[k][m]] = e;
  }
  T.normalize();
  return a;
}

Translation PolycyclicTranslationGroup::sift(Translation g, int& layer) const {
  int k = base_.k;
  layer = 0;
  for (int j = 1; j < k; ++j) {
    if (width_[j] == 0) continue;
    while (true) {
      budget_->charge();
      Vec v = coeff_vector(j, g);
      if (is_zero_vec(v)) break;
      std::size_t p = leading_index(v);
      const auto& rows = lat_[j].rows();
      std::size_t ri = 0;
      while (ri < rows.size() && leading_index(rows[ri]) != p) ++ri;
      if (ri == rows.size()) {
        layer = j;
        return g;
      }
      Rational q = v[p] / rows[ri][p];
      if (!is_integer(q)) {
        layer = j;
        return g;
      }
      g = compose(g, power(reps_[j][ri], -q.get_num()));
    }
  }
  if (!lat_[k].contains(coeff_vector(k, g))) {
    layer = k;
    return g;
  }
  return identity_translation(base_, 1);
}

void PolycyclicTranslationGroup::insert_lower(int j, Translation g, std::vector<std::pair<Translation, bool>>& queue) {
  std::vector<Vec> rows = lat_[j].rows();
  auto& reps = reps_[j];
  Vec v = coeff_vector(j, g);
  while (!is_zero_vec(v)) {
    budget_->charge();
    std::size_t p = leading_index(v);
    std::size_t ri = 0;
    while (ri < rows.size() && leading_index(rows[ri]) != p) ++ri;
    if (ri == rows.size()) {
      if (v[p] < 0) {
        for (auto& x : v) x = -x;
        g = invert(g);
      }
      rows.push_back(v);
      reps.push_back(g);
      v.assign(v.size(), Rational(0));
      g = identity_translation(base_, 1);
      break;
    }
    // unimodular combination of (row, v) clearing v at p
    Rational a = rows[ri][p], b = v[p];
    Integer num = gcd(a.get_num(), b.get_num());
    Integer den = lcm(a.get_den(), b.get_den());
    Rational gg(num, den);
    gg.canonicalize();
    Integer ap = Rational(a / gg).get_num(), bp = Rational(b / gg).get_num();
    mpz_class d, s, t;
    mpz_gcdext(d.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), ap.get_mpz_t(), bp.get_mpz_t());
    Vec nr = rows[ri], nv = v;
    for (auto& x : nr) x *= Rational(s);
    axpy(nr, Rational(t), v);
    for (auto& x : nv) x *= Rational(ap);
    axpy(nv, Rational(-bp), rows[ri]);
    Translation er = compose(power(reps[ri], s), power(g, t));
    Translation ev = compose(power(g, ap), power(reps[ri], -bp));
    queue.push_back({reps[ri], false});
    if (nr[p] < 0) {
      for (auto& x : nr) x = -x;
      er = invert(er);
    }
    rows[ri] = nr;
    reps[ri] = er;
    v = nv;
    g = ev;
  }
  if (!g.is_identity()) queue.push_back({g, false});
  // keep rows sorted by pivot, reps aligned
  std::vector<std::size_t> order(rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return leading_index(rows[x]) < leading_index(rows[y]); });
  std::vector<Translation> sorted_reps;
  std::vector<Vec> sorted_rows;
  for (auto i : order) {
    sorted_rows.push_back(rows[i]);
    sorted_reps.push_back(reps[i]);
  }
  reps = std::move(sorted_reps);
  lat_[j] = Lattice(coeff_dim(j));
  lat_[j].set_rows(std::move(sorted_rows));
}

std::vector<Translation> PolycyclicTranslationGroup::all_reps() const {
  std::vector<Translation> out;
  for (int j = 1; j < base_.k; ++j) out.insert(out.end(), reps_[j].begin(), reps_[j].end());
  for (const auto& r : lat_[base_.k].rows()) out.push_back(top_element(r));
  return out;
}

bool PolycyclicTranslationGroup::contains(const Translation& g) const {
  int layer = 0;
  sift(g, layer);
  return layer == 0;
}

bool PolycyclicTranslationGroup::layer_constant(int j) const {
  auto nonconst = [&](const Vec& v) {
    for (std::size_t i = width_[j]; i < v.size(); ++i)
      if (v[i] != 0) return true;
    return false;
  };
  for (const auto& r : lat_[j].rows())
    if (nonconst(r)) return false;
  for (const auto& r : lat_[j].divisible())
    if (nonconst(r)) return false;
  return true;
}

bool PolycyclicTranslationGroup::lower_layers_constant() const {
  for (int j = 1; j < base_.k; ++j)
    if (!layer_constant(j)) return false;
  return true;
}

Lattice PolycyclicTranslationGroup::constants(int j) const {
  std::vector<bool> keep(coeff_dim(j), false);
  for (std::size_t i = 0; i < width_[j]; ++i) keep[i] = true;
  Lattice r = lat_[j].restrict_to(keep);
  Lattice out(width_[j]);
  auto head = [&](const Vec& v) { return Vec(v.begin(), v.begin() + width_[j]); };
  for (const auto& d : r.divisible()) out.add_divisible(head(d));
  for (const auto& v : r.rows()) out.add(head(v));
  return out;
}

Point PolycyclicTranslationGroup::representative(const Point& x0) const {
  if (!lower_layers_constant()) fail(ErrorKind::Unsupported, "orbit representatives need constant lower layers");
  int k = base_.k;
  Point y = reduce_point(base_, x0);
  for (int j = 1; j < k; ++j) {
    auto pos = base_.slots_of_degree(j);
    const auto& rows = lat_[j].rows();
    for (std::size_t ri = 0; ri < rows.size(); ++ri) {
      std::size_t p = leading_index(rows[ri]);
      Integer m = floor_of(y[pos[p]] / rows[ri][p]);
      if (m != 0) y = power(reps_[j][ri], -m).act(y);
    }
  }
  auto pos = base_.slots_of_degree(k);
  if (pos.empty()) return y;
  Point low = truncate(base_, y, k - 1);
  auto eval = [&](const Vec& v) {
    Vec out(width_[k], Rational(0));
    for (std::size_t m = 0; m < monos_[k].size(); ++m) {
      Rational mv = monomial_value(monos_[k][m], low);
      if (mv == 0) continue;
      for (std::size_t t = 0; t < width_[k]; ++t) out[t] += v[m * width_[k] + t] * mv;
    }
    return out;
  };
  Lattice M(width_[k]);
  for (const auto& d : lat_[k].divisible()) M.add_divisible(eval(d));
  for (const auto& r : lat_[k].rows()) M.add(eval(r));
  Vec top(width_[k]);
  for (std::size_t t = 0; t < width_[k]; ++t) top[t] = y[pos[t]];
  top = M.reduce(top);
  for (std::size_t t = 0; t < width_[k]; ++t) y[pos[t]] = top[t];
  return y;
}

}  // namespace nilspace
