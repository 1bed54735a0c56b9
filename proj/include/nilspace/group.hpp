#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nilspace/rational.hpp"

namespace nilspace {

enum class Ring { Integers, Residues, Rationals, Torus };

const char* ring_name(Ring r);

// One coordinate of an abelian group: Z, Z_m, Q or the circle Q/Z.
struct CoordKind {
  Ring ring = Ring::Integers;
  Integer modulus = 0;

  static CoordKind integers() { return {Ring::Integers, 0}; }
  static CoordKind residues(const Integer& m) { return {Ring::Residues, m}; }
  static CoordKind rationals() { return {Ring::Rationals, 0}; }
  static CoordKind torus() { return {Ring::Torus, 0}; }

  bool discrete() const { return ring == Ring::Integers || ring == Ring::Residues; }
  bool finite() const { return ring == Ring::Residues; }
  bool member(const Rational& a) const;
  Rational reduce(const Rational& a) const;
  CoordKind lifted() const;
  bool operator==(const CoordKind& o) const { return ring == o.ring && modulus == o.modulus; }
};

struct GroupSpec {
  Ring kind = Ring::Integers;
  Integer modulus = 0;
  int rank = 1;

  std::vector<CoordKind> coords() const;
  static GroupSpec from_coords(const std::vector<CoordKind>& c);
};

using Element = std::vector<Rational>;
using Kinds = std::vector<CoordKind>;

Element zero_element(const Kinds& kinds);
Element add(const Kinds& kinds, const Element& a, const Element& b);
Element sub(const Kinds& kinds, const Element& a, const Element& b);
Element neg(const Kinds& kinds, const Element& a);
Element scale(const Kinds& kinds, const Rational& c, const Element& a);
Element reduce(const Kinds& kinds, const Element& a);
bool is_zero(const Element& a);
bool is_member(const Kinds& kinds, const Element& a);

struct Slot {
  int degree = 1;
  CoordKind kind;
  bool operator==(const Slot& o) const { return degree == o.degree && kind == o.kind; }
};

// The product nilspace prod_i D_i(A_i) with each A_i a product of coordinates.
// Slots are kept sorted by degree.
struct Signature {
  int k = 0;
  std::vector<Slot> slots;

  static Signature free(int k, const std::vector<int>& discrete, const std::vector<int>& continuous);
  static Signature finite(int k, const std::vector<std::vector<long>>& moduli);
  static Signature from_slots(int k, std::vector<Slot> slots);

  std::size_t dim() const { return slots.size(); }
  Signature prefix(int j) const;
  std::vector<std::size_t> slots_of_degree(int i) const;
  Kinds kinds() const;
  Kinds kinds_of_degree(int i) const;
  bool is_finite() const;
  bool is_free() const;
  bool has_continuous() const;
  Signature continuous_closure() const;
  std::uint64_t finite_size() const;
  bool operator==(const Signature& o) const { return k == o.k && slots == o.slots; }
};

using Point = std::vector<Rational>;

bool is_point(const Signature& sig, const Point& p);
Point reduce_point(const Signature& sig, const Point& p);
// Projection to the coordinates of degree at most j.
Point truncate(const Signature& sig, const Point& p, int j);

std::string point_to_string(const Point& p);

}  // namespace nilspace
