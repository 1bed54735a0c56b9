#include "nilspace/cubespace.hpp"

#include <algorithm>
#include <functional>

#include "nilspace/error.hpp"

namespace nilspace {

void Budget::charge(std::uint64_t c) {
  used += c;
  if (used > limit)
    fail(ErrorKind::BudgetExceeded, "enumeration budget of " + std::to_string(limit) + " exceeded");
}

bool FiniteCubespace::is_cube(const std::vector<PointId>& q) const {
  std::size_t len = q.size();
  if (len == 0 || (len & (len - 1))) fail(ErrorKind::DimensionMismatch, "cube needs 2^n vertices");
  return is_cube(q.data(), std::countr_zero(len));
}

static CubeList collect(int n, const std::function<void(const CubeVisitor&)>& run) {
  CubeList out{n, {}};
  std::size_t len = std::size_t(1) << n;
  run([&](const PointId* q) {
    out.data.insert(out.data.end(), q, q + len);
    return true;
  });
  return out;
}

CubeList enumerate_cubes(const FiniteCubespace& space, int n, Budget& budget) {
  return collect(n, [&](const CubeVisitor& v) { for_each_cube(space, n, budget, v); });
}

CubeList enumerate_cubes_bruteforce(const FiniteCubespace& space, int n, Budget& budget) {
  return collect(n, [&](const CubeVisitor& v) { for_each_cube_bruteforce(space, n, budget, v); });
}

bool for_each_cube(const FiniteCubespace& space, int n, Budget& budget, const CubeVisitor& visit) {
  bool completed = true;
  auto wrapped = [&](const PointId* q) {
    if (!visit(q)) completed = false;
    return completed;
  };
  if (space.for_each_cube_fast(n, budget, wrapped)) return completed;
  return for_each_cube_bruteforce(space, n, budget, visit);
}

bool for_each_cube_bruteforce(const FiniteCubespace& space, int n, Budget& budget, const CubeVisitor& visit) {
  if (n < 0 || n > 8) fail(ErrorKind::DimensionMismatch, "cube dimension out of range");
  std::size_t len = std::size_t(1) << n;
  std::vector<std::vector<Face>> tops(len);
  for (Vertex v = 1; v < len; ++v) tops[v] = faces_with_top(v);
  std::vector<PointId> q(len, 0);
  std::vector<PointId> scratch;
  PointId N = static_cast<PointId>(space.size());
  bool stop = false;
  std::function<void(Vertex)> rec = [&](Vertex v) {
    if (v == len) {
      if (!visit(q.data())) stop = true;
      return;
    }
    for (PointId x = 0; x < N && !stop; ++x) {
      budget.charge();
      q[v] = x;
      bool ok = true;
      for (const Face& f : tops[v]) {
        scratch.resize(f.vertices.size());
        for (std::size_t u = 0; u < f.vertices.size(); ++u) scratch[u] = q[f.vertices[u]];
        if (!space.is_cube(scratch.data(), f.dim)) {
          ok = false;
          break;
        }
      }
      if (ok) rec(v + 1);
    }
  };
  rec(0);
  return !stop;
}

std::uint64_t slot_cube_count(int degree, std::uint64_t modulus, int n) {
  std::uint64_t e = 0;
  for (int j = 0; j <= std::min(degree, n); ++j) {
    std::uint64_t c = 1;
    for (int t = 0; t < j; ++t) c = c * (n - t) / (t + 1);
    e += c;
  }
  std::uint64_t r = 1;
  for (std::uint64_t t = 0; t < e; ++t) r *= modulus;
  return r;
}

// ---------------------------------------------------------------- product

ProductNilspace::ProductNilspace(const Signature& sig) : sig_(sig) {
  for (const auto& sl : sig_.slots) {
    if (!sl.kind.finite()) fail(ErrorKind::Unsupported, "finite product nilspace needs residue slots");
    if (!sl.kind.modulus.fits_slong_p() || sl.kind.modulus > 1 << 16)
      fail(ErrorKind::BudgetExceeded, "modulus too large");
    radix_.push_back(sl.kind.modulus.get_si());
    mod_.push_back(sl.kind.modulus.get_si());
  }
  build();
}

ProductNilspace ProductNilspace::integer_box(const Signature& sig, int side) {
  ProductNilspace p;
  p.sig_ = sig;
  p.box_ = true;
  if (side < 1) fail(ErrorKind::Invalid, "box side must be positive");
  for (const auto& sl : sig.slots) {
    if (sl.kind.ring == Ring::Residues) {
      p.radix_.push_back(sl.kind.modulus.get_si());
      p.mod_.push_back(sl.kind.modulus.get_si());
    } else if (sl.kind.ring == Ring::Integers) {
      p.radix_.push_back(side);
      p.mod_.push_back(0);
    } else {
      fail(ErrorKind::Unsupported, "box nilspace needs discrete slots");
    }
  }
  p.build();
  return p;
}

void ProductNilspace::build() {
  std::uint64_t n = 1;
  stride_.clear();
  for (auto r : radix_) {
    stride_.push_back(static_cast<std::int64_t>(n));
    n *= static_cast<std::uint64_t>(r);
    if (n > (1u << 24)) fail(ErrorKind::BudgetExceeded, "finite nilspace too large to index");
  }
  size_ = static_cast<std::size_t>(n);
  std::size_t d = sig_.dim();
  coords_.assign(size_ * d, 0);
  for (std::size_t id = 0; id < size_; ++id) {
    std::size_t x = id;
    for (std::size_t s = 0; s < d; ++s) {
      coords_[id * d + s] = static_cast<std::int64_t>(x % radix_[s]);
      x /= radix_[s];
    }
  }
}

bool ProductNilspace::is_cube(const PointId* q, int n) const {
  std::size_t len = std::size_t(1) << n;
  std::size_t d = sig_.dim();
  std::int64_t vals[256];
  if (len > 256) fail(ErrorKind::DimensionMismatch, "cube dimension too large");
  for (std::size_t s = 0; s < d; ++s) {
    int deg = sig_.slots[s].degree;
    if (n <= deg) continue;
    for (std::size_t v = 0; v < len; ++v) vals[v] = coords_[std::size_t(q[v]) * d + s];
    if (!gray_cube(deg, n, vals, mod_[s])) return false;
  }
  return true;
}

bool ProductNilspace::for_each_cube_fast(int n, Budget& budget, const CubeVisitor& visit) const {
  if (box_) return false;
  std::size_t len = std::size_t(1) << n;
  std::size_t d = sig_.dim();
  std::uint64_t total = 1;
  for (std::size_t s = 0; s < d; ++s) {
    std::uint64_t c = slot_cube_count(sig_.slots[s].degree, static_cast<std::uint64_t>(mod_[s]), n);
    if (c > budget.limit || total > budget.limit / std::max<std::uint64_t>(c, 1))
      fail(ErrorKind::BudgetExceeded, "cube count exceeds budget");
    total *= c;
  }
  budget.charge(total);
  // per-slot cube value tables from the parametrization sum_{|S|<=i} a_S prod_{j in S} v_j
  std::vector<std::vector<std::int64_t>> slot_cubes(d);
  for (std::size_t s = 0; s < d; ++s) {
    int deg = sig_.slots[s].degree;
    std::int64_t m = mod_[s];
    std::vector<Vertex> monos;
    for (Vertex S = 0; S < len; ++S)
      if (height(S) <= deg) monos.push_back(S);
    std::vector<std::int64_t> a(monos.size(), 0);
    auto& tab = slot_cubes[s];
    while (true) {
      for (Vertex v = 0; v < len; ++v) {
        std::int64_t val = 0;
        for (std::size_t t = 0; t < monos.size(); ++t)
          if ((v & monos[t]) == monos[t]) val += a[t];
        tab.push_back(val % m);
      }
      std::size_t t = 0;
      while (t < a.size() && ++a[t] == m) a[t++] = 0;
      if (t == a.size()) break;
    }
  }
  std::vector<std::size_t> pick(d, 0);
  std::vector<PointId> q(len);
  for (std::uint64_t c = 0; c < total; ++c) {
    std::fill(q.begin(), q.end(), 0);
    for (std::size_t s = 0; s < d; ++s) {
      const std::int64_t* vals = slot_cubes[s].data() + pick[s] * len;
      for (std::size_t v = 0; v < len; ++v) q[v] += static_cast<PointId>(vals[v] * stride_[s]);
    }
    if (!visit(q.data())) return true;
    // slot 0 varies slowest
    std::size_t s = d;
    while (s > 0) {
      --s;
      if (++pick[s] < slot_cubes[s].size() / len) break;
      pick[s] = 0;
    }
  }
  return true;
}

std::string ProductNilspace::label(PointId p) const { return point_to_string(point(p)); }

std::optional<std::uint64_t> ProductNilspace::factor_key(PointId p, int j) const {
  std::uint64_t key = 0;
  for (std::size_t s = 0; s < sig_.dim(); ++s)
    if (sig_.slots[s].degree <= j) key += static_cast<std::uint64_t>(coords(p)[s] * stride_[s]);
  return key;
}

PointId ProductNilspace::index_of(const Point& p) const {
  if (p.size() != sig_.dim()) fail(ErrorKind::DimensionMismatch, "point has wrong length");
  std::int64_t id = 0;
  for (std::size_t s = 0; s < p.size(); ++s) {
    if (!is_integer(p[s])) fail(ErrorKind::Invalid, "non-integer coordinate");
    Integer v = p[s].get_num();
    if (mod_[s]) v = mod_floor(p[s], Integer(static_cast<long>(mod_[s])));
    if (v < 0 || v >= radix_[s]) fail(ErrorKind::Invalid, "coordinate outside the box");
    id += v.get_si() * stride_[s];
  }
  return static_cast<PointId>(id);
}

Point ProductNilspace::point(PointId id) const {
  Point p(sig_.dim());
  for (std::size_t s = 0; s < p.size(); ++s) p[s] = Rational(static_cast<long>(coords(id)[s]));
  return p;
}

// ---------------------------------------------------------------- group

bool GroupNilspace::is_cube(const PointId* q, int n) const {
  std::vector<GroupElem> v(q, q + (std::size_t(1) << n));
  return !hk_first_failure(g_, std::move(v), n).has_value();
}

bool GroupNilspace::for_each_cube_fast(int n, Budget& budget, const CubeVisitor& visit) const {
  std::uint64_t c = hk_cube_count(g_, n);
  if (c > budget.limit - std::min(budget.limit, budget.used))
    fail(ErrorKind::BudgetExceeded, "cube count exceeds budget");
  budget.charge(c);
  for_each_hk_cube(g_, n, [&](const std::vector<GroupElem>& q) { return visit(q.data()); });
  return true;
}

std::optional<std::uint64_t> GroupNilspace::factor_key(PointId p, int j) const {
  GroupElem best = p;
  for (auto h : g_.layer(j + 1)) best = std::min(best, g_.mul(p, h));
  return best;
}

// ---------------------------------------------------------------- materialized

bool MaterializedCubespace::is_cube(const PointId* q, int n) const {
  if (n > cap_)
    fail(ErrorKind::BudgetExceeded, "cube dimension " + std::to_string(n) + " above materialized cap");
  std::vector<PointId> v(q, q + (std::size_t(1) << n));
  return sets_[n].count(v) != 0;
}

bool MaterializedCubespace::for_each_cube_fast(int n, Budget& budget, const CubeVisitor& visit) const {
  if (n > cap_)
    fail(ErrorKind::BudgetExceeded, "cube dimension " + std::to_string(n) + " above materialized cap");
  std::vector<std::vector<PointId>> sorted(sets_[n].begin(), sets_[n].end());
  std::sort(sorted.begin(), sorted.end());
  budget.charge(sorted.size());
  for (const auto& c : sorted)
    if (!visit(c.data())) break;
  return true;
}

std::string MaterializedCubespace::label(PointId p) const {
  return p < labels_.size() ? labels_[p] : std::to_string(p);
}

void MaterializedCubespace::add(const std::vector<PointId>& q) {
  int n = std::countr_zero(q.size());
  if (n > cap_) fail(ErrorKind::DimensionMismatch, "cube above cap");
  sets_[n].insert(q);
}

}  // namespace nilspace
