#include "nilspace/group.hpp"

#include <algorithm>

#include "nilspace/error.hpp"

namespace nilspace {

const char* ring_name(Ring r) {
  switch (r) {
    case Ring::Integers: return "integers";
    case Ring::Residues: return "residues";
    case Ring::Rationals: return "rationals";
    case Ring::Torus: return "torus";
  }
  return "?";
}

bool CoordKind::member(const Rational& a) const {
  switch (ring) {
    case Ring::Integers: return is_integer(a);
    case Ring::Residues: return is_integer(a) && a >= 0 && a < Rational(modulus);
    case Ring::Rationals: return true;
    case Ring::Torus: return a >= 0 && a < 1;
  }
  return false;
}

Rational CoordKind::reduce(const Rational& a) const {
  switch (ring) {
    case Ring::Integers:
      if (!is_integer(a)) fail(ErrorKind::Invalid, "non-integer value " + to_string(a) + " in Z");
      return a;
    case Ring::Residues:
      return Rational(mod_floor(a, modulus));
    case Ring::Rationals: return a;
    case Ring::Torus: return frac(a);
  }
  return a;
}

CoordKind CoordKind::lifted() const {
  switch (ring) {
    case Ring::Residues: return integers();
    case Ring::Torus: return rationals();
    default: return *this;
  }
}

std::vector<CoordKind> GroupSpec::coords() const {
  if (rank < 0) fail(ErrorKind::Invalid, "negative rank");
  if (kind == Ring::Residues && modulus < 1) fail(ErrorKind::Invalid, "modulus must be positive");
  CoordKind c{kind, kind == Ring::Residues ? modulus : Integer(0)};
  return std::vector<CoordKind>(static_cast<std::size_t>(rank), c);
}

GroupSpec GroupSpec::from_coords(const std::vector<CoordKind>& c) {
  if (c.empty()) return GroupSpec{Ring::Integers, 0, 0};
  for (const auto& x : c)
    if (!(x == c.front())) fail(ErrorKind::Invalid, "mixed coordinate kinds in one group");
  return GroupSpec{c.front().ring, c.front().modulus, static_cast<int>(c.size())};
}

Element zero_element(const Kinds& kinds) { return Element(kinds.size(), Rational(0)); }

static void check_len(const Kinds& kinds, const Element& a) {
  if (a.size() != kinds.size())
    fail(ErrorKind::DimensionMismatch, "element of length " + std::to_string(a.size()) +
                                           " for group of rank " + std::to_string(kinds.size()));
}

Element add(const Kinds& kinds, const Element& a, const Element& b) {
  check_len(kinds, a);
  check_len(kinds, b);
  Element r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = kinds[i].reduce(a[i] + b[i]);
  return r;
}

Element sub(const Kinds& kinds, const Element& a, const Element& b) {
  check_len(kinds, a);
  check_len(kinds, b);
  Element r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = kinds[i].reduce(a[i] - b[i]);
  return r;
}

Element neg(const Kinds& kinds, const Element& a) {
  check_len(kinds, a);
  Element r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = kinds[i].reduce(-a[i]);
  return r;
}

Element scale(const Kinds& kinds, const Rational& c, const Element& a) {
  check_len(kinds, a);
  Element r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = kinds[i].reduce(c * a[i]);
  return r;
}

Element reduce(const Kinds& kinds, const Element& a) {
  check_len(kinds, a);
  Element r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = kinds[i].reduce(a[i]);
  return r;
}

bool is_zero(const Element& a) {
  return std::all_of(a.begin(), a.end(), [](const Rational& x) { return x == 0; });
}

bool is_member(const Kinds& kinds, const Element& a) {
  if (a.size() != kinds.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!kinds[i].member(a[i])) return false;
  return true;
}

Signature Signature::free(int k, const std::vector<int>& discrete, const std::vector<int>& continuous) {
  if (static_cast<int>(discrete.size()) != k || static_cast<int>(continuous.size()) != k)
    fail(ErrorKind::DimensionMismatch, "signature lists must have length k");
  Signature s;
  s.k = k;
  for (int i = 1; i <= k; ++i) {
    if (discrete[i - 1] < 0 || continuous[i - 1] < 0) fail(ErrorKind::Invalid, "negative rank");
    for (int j = 0; j < discrete[i - 1]; ++j) s.slots.push_back({i, CoordKind::integers()});
    for (int j = 0; j < continuous[i - 1]; ++j) s.slots.push_back({i, CoordKind::rationals()});
  }
  return s;
}

Signature Signature::finite(int k, const std::vector<std::vector<long>>& moduli) {
  if (static_cast<int>(moduli.size()) != k)
    fail(ErrorKind::DimensionMismatch, "moduli list must have length k");
  Signature s;
  s.k = k;
  for (int i = 1; i <= k; ++i)
    for (long m : moduli[i - 1]) {
      if (m < 1) fail(ErrorKind::Invalid, "modulus must be positive");
      s.slots.push_back({i, CoordKind::residues(Integer(m))});
    }
  return s;
}

Signature Signature::from_slots(int k, std::vector<Slot> slots) {
  for (const auto& sl : slots)
    if (sl.degree < 1 || sl.degree > k) fail(ErrorKind::Invalid, "slot degree out of range");
  std::stable_sort(slots.begin(), slots.end(),
                   [](const Slot& a, const Slot& b) { return a.degree < b.degree; });
  Signature s;
  s.k = k;
  s.slots = std::move(slots);
  return s;
}

Signature Signature::prefix(int j) const {
  Signature s;
  s.k = std::max(0, std::min(j, k));
  for (const auto& sl : slots)
    if (sl.degree <= j) s.slots.push_back(sl);
  return s;
}

std::vector<std::size_t> Signature::slots_of_degree(int i) const {
  std::vector<std::size_t> r;
  for (std::size_t t = 0; t < slots.size(); ++t)
    if (slots[t].degree == i) r.push_back(t);
  return r;
}

Kinds Signature::kinds() const {
  Kinds r;
  for (const auto& sl : slots) r.push_back(sl.kind);
  return r;
}

Kinds Signature::kinds_of_degree(int i) const {
  Kinds r;
  for (const auto& sl : slots)
    if (sl.degree == i) r.push_back(sl.kind);
  return r;
}

bool Signature::is_finite() const {
  return std::all_of(slots.begin(), slots.end(), [](const Slot& s) { return s.kind.finite(); });
}

bool Signature::is_free() const {
  return std::all_of(slots.begin(), slots.end(), [](const Slot& s) {
    return s.kind.ring == Ring::Integers || s.kind.ring == Ring::Rationals;
  });
}

bool Signature::has_continuous() const {
  return std::any_of(slots.begin(), slots.end(),
                     [](const Slot& s) { return s.kind.ring == Ring::Rationals; });
}

Signature Signature::continuous_closure() const {
  Signature s = *this;
  for (auto& sl : s.slots)
    if (sl.kind.ring == Ring::Integers) sl.kind = CoordKind::rationals();
  return s;
}

std::uint64_t Signature::finite_size() const {
  if (!is_finite()) fail(ErrorKind::Unsupported, "signature is not finite");
  std::uint64_t n = 1;
  for (const auto& sl : slots) {
    if (!sl.kind.modulus.fits_ulong_p()) fail(ErrorKind::BudgetExceeded, "modulus too large");
    n *= sl.kind.modulus.get_ui();
    if (n > (1ull << 32)) fail(ErrorKind::BudgetExceeded, "finite nilspace too large");
  }
  return n;
}

bool is_point(const Signature& sig, const Point& p) {
  if (p.size() != sig.slots.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (!sig.slots[i].kind.member(p[i])) return false;
  return true;
}

Point reduce_point(const Signature& sig, const Point& p) {
  if (p.size() != sig.slots.size()) fail(ErrorKind::DimensionMismatch, "point has wrong length");
  Point r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[i] = sig.slots[i].kind.reduce(p[i]);
  return r;
}

Point truncate(const Signature& sig, const Point& p, int j) {
  Point r;
  for (std::size_t i = 0; i < sig.slots.size(); ++i)
    if (sig.slots[i].degree <= j) r.push_back(p[i]);
  return r;
}

std::string point_to_string(const Point& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ",";
    s += to_string(p[i]);
  }
  return s + ")";
}

}  // namespace nilspace
