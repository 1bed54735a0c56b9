#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nilspace/cubespace.hpp"
#include "nilspace/poly.hpp"

namespace nilspace {

// x -> x + (0, ..., T_s, T_{s+1}(pi_1 x), ..., T_k(pi_{k-s} x)), with
// T_i : prod_{j<=i-s} D_j(A_j) -> D_{i-s}(A_i).
struct Translation {
  Signature space;
  int height = 1;
  std::vector<PolyMorphism> components;  // components[i - height] for i = height..k

  const PolyMorphism& component(int i) const { return components.at(i - height); }
  Point act(const Point& x) const;
  bool is_identity() const;
  std::string to_string() const;
};

Translation identity_translation(const Signature& space, int height = 1);
// Constant shift by c in the degree-i coordinates; height i.
Translation shift_translation(const Signature& space, int degree, const Element& c);
// Builds the translation from the displacement x -> alpha(x) - x by Taylor decomposition.
Translation translation_from_displacement(const Signature& space, int height, const PointFunction& displacement);

std::optional<std::string> translation_violation(const Translation& a);
inline bool is_valid_translation(const Translation& a) { return !translation_violation(a).has_value(); }

// Largest s with a in tran_s (k+1 for the identity).
int natural_height(const Translation& a);
// Re-expresses a in tran_s for s <= natural_height(a).
Translation as_height(const Translation& a, int s);
bool same_map(const Translation& a, const Translation& b);

Translation compose(const Translation& a, const Translation& b);  // a o b
Translation invert(const Translation& a);
Translation power(const Translation& a, const Integer& e);
Translation commutator(const Translation& a, const Translation& b);  // a^-1 b^-1 a b
// Induced translation of the j-step factor: drop degrees above j.
Translation eta(int j, const Translation& a);

// Point permutation of a translation of a finite product nilspace.
std::vector<PointId> permutation_of(const Translation& a, const ProductNilspace& space);
// Recovers a translation from a point map of a finite product nilspace, if it is one
// of height >= s in the parametrized form.
std::optional<Translation> translation_from_map(const ProductNilspace& space, const std::vector<PointId>& f, int s);

struct ArrowOutcome {
  bool ok = true;
  std::vector<PointId> witness_cube;  // q such that <q, f o q>_s is not a cube
};

// <q, f o q>_s is a cube for every q of dimension <= k+1-s.
ArrowOutcome is_translation_bruteforce(const FiniteCubespace& space, const std::vector<PointId>& f, int s,
                                       Budget& budget);
// Every map X -> X passing the arrow test, by backtracking over function tables.
std::vector<std::vector<PointId>> all_translations_bruteforce(const FiniteCubespace& space, int s, Budget& budget);

// tran_s(F) of a finite product nilspace from the parametrization.
std::vector<Translation> enumerate_translation_group(const Signature& space, int s, Budget& budget);

}  // namespace nilspace
