#include "nilspace/lattice.hpp"

#include <algorithm>

#include "nilspace/error.hpp"

namespace nilspace {

std::size_t leading_index(const Vec& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) return i;
  return v.size();
}

bool is_zero_vec(const Vec& v) { return leading_index(v) == v.size(); }

static void axpy(Vec& y, const Rational& a, const Vec& x) {
  for (std::size_t i = 0; i < y.size(); ++i)
    if (x[i] != 0) y[i] += a * x[i];
}

// a = g a', b = g b' with a', b' coprime integers.
static void rational_gcd(const Rational& a, const Rational& b, Integer& ap, Integer& bp) {
  Integer num = gcd(a.get_num(), b.get_num());
  Integer den = lcm(a.get_den(), b.get_den());
  Rational g(num, den);
  g.canonicalize();
  Rational x = a / g, y = b / g;
  ap = x.get_num();
  bp = y.get_num();
}

Vec Lattice::reduce_divisible(Vec v) const {
  for (const auto& d : div_) {
    std::size_t p = leading_index(d);
    if (v[p] != 0) axpy(v, -v[p], d);
  }
  return v;
}

void Lattice::insert_row(Vec v) {
  while (!is_zero_vec(v)) {
    std::size_t p = leading_index(v);
    auto it = std::find_if(rows_.begin(), rows_.end(), [&](const Vec& r) { return leading_index(r) == p; });
    if (it == rows_.end()) {
      if (v[p] < 0)
        for (auto& x : v) x = -x;
      rows_.push_back(std::move(v));
      std::sort(rows_.begin(), rows_.end(),
                [](const Vec& a, const Vec& b) { return leading_index(a) < leading_index(b); });
      return;
    }
    Vec& r = *it;
    Integer ap, bp;
    rational_gcd(r[p], v[p], ap, bp);
    mpz_class g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), ap.get_mpz_t(), bp.get_mpz_t());
    Vec nr(dim_), nv(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      nr[i] = Rational(s) * r[i] + Rational(t) * v[i];
      nv[i] = Rational(ap) * v[i] - Rational(bp) * r[i];
    }
    if (nr[p] < 0)
      for (auto& x : nr) x = -x;
    r = std::move(nr);
    v = std::move(nv);
  }
}

void Lattice::rebuild_rows() {
  auto old = std::move(rows_);
  rows_.clear();
  for (auto& r : old) insert_row(reduce_divisible(r));
}

bool Lattice::add(const Vec& v) {
  if (v.size() != dim_) fail(ErrorKind::DimensionMismatch, "lattice vector length");
  if (contains(v)) return false;
  insert_row(reduce_divisible(v));
  return true;
}

bool Lattice::add_divisible(const Vec& v) {
  if (v.size() != dim_) fail(ErrorKind::DimensionMismatch, "lattice vector length");
  Vec w = reduce_divisible(v);
  if (is_zero_vec(w)) return false;
  std::size_t p = leading_index(w);
  Rational inv = 1 / w[p];
  for (auto& x : w) x *= inv;
  for (auto& d : div_)
    if (d[p] != 0) axpy(d, -d[p], w);
  div_.push_back(std::move(w));
  std::sort(div_.begin(), div_.end(), [](const Vec& a, const Vec& b) { return leading_index(a) < leading_index(b); });
  rebuild_rows();
  return true;
}

void Lattice::decompose(const Vec& v, std::vector<Integer>& lat, std::vector<Rational>& div) const {
  lat.assign(rows_.size(), 0);
  div.assign(div_.size(), 0);
  Vec w = v;
  for (std::size_t i = 0; i < div_.size(); ++i) {
    std::size_t p = leading_index(div_[i]);
    div[i] = w[p];
    if (w[p] != 0) axpy(w, -w[p], div_[i]);
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    std::size_t p = leading_index(rows_[i]);
    Integer m = floor_of(w[p] / rows_[i][p]);
    lat[i] = m;
    if (m != 0) axpy(w, Rational(-m), rows_[i]);
  }
}

Vec Lattice::reduce(const Vec& v) const {
  std::vector<Integer> lat;
  std::vector<Rational> div;
  decompose(v, lat, div);
  Vec w = v;
  for (std::size_t i = 0; i < div_.size(); ++i)
    if (div[i] != 0) axpy(w, -div[i], div_[i]);
  for (std::size_t i = 0; i < rows_.size(); ++i)
    if (lat[i] != 0) axpy(w, Rational(-lat[i]), rows_[i]);
  return w;
}

bool Lattice::contains(const Vec& v) const { return is_zero_vec(reduce(v)); }

Lattice Lattice::restrict_to(const std::vector<bool>& keep) const {
  // reorder so that discarded coordinates lead, then keep rows whose pivots fall in kept ones
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < dim_; ++i)
    if (!keep[i]) order.push_back(i);
  for (std::size_t i = 0; i < dim_; ++i)
    if (keep[i]) order.push_back(i);
  auto permute = [&](const Vec& v) {
    Vec w(dim_);
    for (std::size_t i = 0; i < dim_; ++i) w[i] = v[order[i]];
    return w;
  };
  auto unpermute = [&](const Vec& w) {
    Vec v(dim_);
    for (std::size_t i = 0; i < dim_; ++i) v[order[i]] = w[i];
    return v;
  };
  Lattice p(dim_);
  for (const auto& d : div_) p.add_divisible(permute(d));
  for (const auto& r : rows_) p.add(permute(r));
  std::size_t first_kept = dim_ - std::count(keep.begin(), keep.end(), true);
  Lattice out(dim_);
  for (const auto& d : p.div_)
    if (leading_index(d) >= first_kept) out.add_divisible(unpermute(d));
  for (const auto& r : p.rows_)
    if (leading_index(r) >= first_kept) out.add(unpermute(r));
  return out;
}

bool Lattice::operator==(const Lattice& o) const {
  if (dim_ != o.dim_ || rank() != o.rank()) return false;
  for (const auto& d : div_)
    if (!o.contains(d)) return false;
  for (const auto& d : o.div_)
    if (!contains(d)) return false;
  for (const auto& r : rows_)
    if (!o.contains(r)) return false;
  for (const auto& r : o.rows_)
    if (!contains(r)) return false;
  return true;
}

std::vector<Integer> smith_invariants(std::vector<std::vector<Integer>> a, std::size_t ncols) {
  std::size_t m = a.size();
  std::vector<Integer> out;
  std::size_t t = 0;
  while (t < m && t < ncols) {
    // smallest nonzero entry in the remaining block as pivot
    std::size_t pr = m, pc = ncols;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < ncols; ++j)
        if (a[i][j] != 0 && (pr == m || abs(a[i][j]) < abs(a[pr][pc]))) pr = i, pc = j;
    if (pr == m) break;
    std::swap(a[t], a[pr]);
    for (auto& row : a) std::swap(row[t], row[pc]);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (a[i][t] == 0) continue;
        Integer q = a[i][t] / a[t][t];
        for (std::size_t j = t; j < ncols; ++j) a[i][j] -= q * a[t][j];
        if (a[i][t] != 0) {
          std::swap(a[t], a[i]);
          clean = false;
        }
      }
      for (std::size_t j = t + 1; j < ncols; ++j) {
        if (a[t][j] == 0) continue;
        Integer q = a[t][j] / a[t][t];
        for (std::size_t i = t; i < m; ++i) a[i][j] -= q * a[i][t];
        if (a[t][j] != 0) {
          for (auto& row : a) std::swap(row[t], row[j]);
          clean = false;
        }
      }
      if (clean) {
        // divisibility condition on the rest of the block
        for (std::size_t i = t + 1; i < m && clean; ++i)
          for (std::size_t j = t + 1; j < ncols; ++j)
            if (a[i][j] % a[t][t] != 0) {
              for (std::size_t c = t; c < ncols; ++c) a[t][c] += a[i][c];
              clean = false;
              break;
            }
      }
    }
    out.push_back(abs(a[t][t]));
    ++t;
  }
  return out;
}

AbelianInvariants integer_quotient(const std::vector<std::vector<Integer>>& rows, std::size_t n) {
  AbelianInvariants g;
  auto inv = smith_invariants(rows, n);
  for (const auto& d : inv)
    if (d > 1) g.torsion.push_back(d);
  g.free_rank = int(n - inv.size());
  return g;
}

Integer AbelianInvariants::order() const {
  if (!finite()) return 0;
  Integer o = 1;
  for (const auto& d : torsion) o *= d;
  return o;
}

std::string AbelianInvariants::to_string() const {
  std::vector<std::string> parts;
  for (const auto& d : torsion) parts.push_back("Z_" + d.get_str());
  auto rep = [&](int r, const std::string& name) {
    if (r == 1) parts.push_back(name);
    if (r > 1) parts.push_back(name + "^" + std::to_string(r));
  };
  rep(free_rank, "Z");
  rep(rational_rank, "Q");
  rep(torus_rank, "Q/Z");
  if (parts.empty()) return "0";
  std::string s = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) s += " x " + parts[i];
  return s;
}

}  // namespace nilspace
