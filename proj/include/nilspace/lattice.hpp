#pragma once

#include <string>
#include <vector>

#include "nilspace/rational.hpp"

namespace nilspace {

using Vec = std::vector<Rational>;

// Z-span of rational row vectors plus an optional Q-span, kept in echelon form.
// Rows of the lattice part are reduced modulo the divisible part, so every
// vector of the module has its leading entry on a pivot column.
class Lattice {
 public:
  explicit Lattice(std::size_t dim = 0) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  // Both return true when the module grew.
  bool add(const Vec& v);
  bool add_divisible(const Vec& v);

  bool contains(const Vec& v) const;
  // Canonical coset representative: pivot coordinates reduced into [0, pivot)
  // for lattice rows and to 0 for divisible rows.
  Vec reduce(const Vec& v) const;
  // Coefficients expressing v - reduce(v): integer multiples of the lattice rows
  // and rational multiples of the divisible rows.
  void decompose(const Vec& v, std::vector<Integer>& lat, std::vector<Rational>& div) const;

  const std::vector<Vec>& rows() const { return rows_; }
  const std::vector<Vec>& divisible() const { return div_; }
  bool empty() const { return rows_.empty() && div_.empty(); }
  std::size_t rank() const { return rows_.size() + div_.size(); }

  // Intersection with the coordinate subspace spanned by `keep`.
  Lattice restrict_to(const std::vector<bool>& keep) const;
  bool operator==(const Lattice& o) const;
  // Trusted echelon rows, for callers tracking their own row operations.
  void set_rows(std::vector<Vec> rows) { rows_ = std::move(rows); }

 private:
  void insert_row(Vec v);
  void rebuild_rows();
  Vec reduce_divisible(Vec v) const;

  std::size_t dim_;
  std::vector<Vec> rows_;  // echelon, positive pivots, zero on divisible pivots
  std::vector<Vec> div_;   // reduced echelon, unit pivots
};

std::size_t leading_index(const Vec& v);  // v.size() when zero
bool is_zero_vec(const Vec& v);

// Invariant factors (nonzero diagonal of the Smith form) of an integer matrix.
std::vector<Integer> smith_invariants(std::vector<std::vector<Integer>> rows, std::size_t ncols);

// A finitely generated abelian group, or a quotient of Z^a x Q^b by a split lattice.
struct AbelianInvariants {
  std::vector<Integer> torsion;  // invariant factors > 1
  int free_rank = 0;             // copies of Z
  int rational_rank = 0;         // copies of Q
  int torus_rank = 0;            // copies of Q/Z
  bool finite() const { return free_rank == 0 && rational_rank == 0 && torus_rank == 0; }
  Integer order() const;
  std::string to_string() const;
  bool operator==(const AbelianInvariants& o) const {
    return torsion == o.torsion && free_rank == o.free_rank && rational_rank == o.rational_rank &&
           torus_rank == o.torus_rank;
  }
};

// Z^n / span(rows) for integer rows.
AbelianInvariants integer_quotient(const std::vector<std::vector<Integer>>& rows, std::size_t n);

}  // namespace nilspace
