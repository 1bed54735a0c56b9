#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nilspace/cubespace.hpp"
#include "nilspace/group.hpp"

namespace nilspace {

// One exponent per source slot.
using MultiIndex = std::vector<int>;

int filtered_degree(const Signature& source, const MultiIndex& m);
// All m with filtered degree <= t, ordered by filtered degree then lexicographically.
std::vector<MultiIndex> monomials_up_to(const Signature& source, int t);
// prod_s binom(x_s, m_s), with no reduction of x.
Rational monomial_value(const MultiIndex& m, const Point& x);

// phi(x) = sum_m a_m binom(x, m) from prod D_i(A_i) into D_t(B).
struct PolyMorphism {
  Signature source;
  Kinds target;
  int degree = 0;
  std::map<MultiIndex, Element> coeffs;

  // Reduces coefficients into the target and drops zero terms.
  void normalize();
  // Residue inputs are reduced first, the value is reduced into the target.
  Element eval(const Point& x) const;
  // Coefficients lifted to rationals, inputs taken as given, no reduction.
  Element eval_lifted(const Point& x) const;
  bool operator==(const PolyMorphism& o) const;
  std::string to_string() const;
};

PolyMorphism zero_morphism(const Signature& source, const Kinds& target, int degree);
PolyMorphism constant_morphism(const Signature& source, const Kinds& target, int degree, const Element& c);

// Reason why phi is not a morphism into D_t(B), or nullopt.
std::optional<std::string> morphism_violation(const PolyMorphism& phi);
inline bool is_morphism(const PolyMorphism& phi) { return !morphism_violation(phi).has_value(); }

struct TaylorOutcome {
  std::optional<PolyMorphism> morphism;
  Point mismatch;    // first box point where the round trip fails
  Element residual;  // f(x) - P(x) there
};

using PointFunction = std::function<Element(const Point&)>;

// Coefficients a_m = (iterated forward difference)^m f (0) for |m| <= t,
// verified on the box {0..side-1}^d (side defaults to t+2).
TaylorOutcome taylor_decompose_checked(const Signature& source, const Kinds& target, int t,
                                       const PointFunction& f, int side = -1);
// Throws NotPolynomial on a failed round trip.
PolyMorphism taylor_decompose(const Signature& source, const Kinds& target, int t, const PointFunction& f,
                              int side = -1);
// Table form: values listed over the box {0..side-1}^d, first slot fastest.
PolyMorphism taylor_decompose_table(const Signature& source, const Kinds& target, int t, int side,
                                    const std::vector<Element>& values);
std::vector<Point> box_points(std::size_t dim, int side);

// Residues -> Z and torus -> Q via least non-negative representatives.
PolyMorphism lift_morphism(const PolyMorphism& phi);

struct BruteForceOutcome {
  bool ok = true;
  std::vector<PointId> witness;  // first cube whose image is not a cube
};

// f is a table over the points of `domain`.  Checks every (t+1)-cube.
BruteForceOutcome is_morphism_bruteforce(const ProductNilspace& domain, const std::vector<Element>& f,
                                         const Kinds& target, int t, Budget& budget);

}  // namespace nilspace

namespace nilspace {

// hom(source, D_t(target)) for a finite source and finite target: all periodic
// polynomials with coefficients in the target, one per distinct function.
std::vector<PolyMorphism> enumerate_hom(const Signature& source, const Kinds& target, int t, Budget& budget);

// Function table of phi over a finite product nilspace.
std::vector<Element> function_table(const PolyMorphism& phi, const ProductNilspace& domain);

}  // namespace nilspace
