#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nilspace/lattice.hpp"
#include "nilspace/translation.hpp"

namespace nilspace {

// A group H of translations of a product nilspace given by generators. A
// generator flagged divisible stands for the one-parameter group {g^t : t in Q}
// and must act on the top degree only. Declared levels give the filtration
// H_i = <g : level(g) >= i>; without them H_i = H cap tran_i.
struct CongruenceCandidate {
  Signature base;
  std::vector<Translation> generators;
  std::vector<bool> divisible;
  std::vector<int> levels;

  bool induced() const { return levels.empty(); }
  bool is_divisible(std::size_t g) const { return g < divisible.size() && divisible[g]; }
  int level(std::size_t g) const { return levels.empty() ? 1 : levels[g]; }
};

struct FtWitness {
  Point x, y;
  int i = 0;  // x ~ y and pi_i(x) = pi_i(y), yet no element of H_{i+1} maps x to y
};

struct FtReport {
  bool fiber_transitive = true;
  std::optional<FtWitness> witness;
};

// Finite base: the group as point permutations, saturated by breadth-first search.
class FiniteTranslationGroup {
 public:
  FiniteTranslationGroup(const ProductNilspace& space, const std::vector<std::vector<PointId>>& gens,
                         Budget& budget, std::size_t cap = 100000);

  std::size_t order() const { return elems_.size(); }
  const std::vector<PointId>& element(std::size_t e) const { return elems_[e]; }
  const std::vector<std::vector<PointId>>& elements() const { return elems_; }
  std::optional<std::size_t> find(const std::vector<PointId>& f) const;
  bool contains(const std::vector<PointId>& f) const { return find(f).has_value(); }
  // Height-1 form and natural height of element e.
  const Translation& translation(std::size_t e) const;
  int height(std::size_t e) const;

 private:
  const ProductNilspace* space_;
  std::vector<std::vector<PointId>> elems_;
  std::unordered_map<std::vector<PointId>, std::size_t, VecHash> index_;
  mutable std::vector<std::optional<Translation>> trans_;
};

// Free base: a polycyclic presentation by layers. Layer j holds the degree-j
// components of the elements acting trivially below degree j, as a lattice of
// coefficient vectors; the top layer may also carry a divisible part.
class PolycyclicTranslationGroup {
 public:
  PolycyclicTranslationGroup(const Signature& base, const std::vector<Translation>& gens,
                             const std::vector<bool>& divisible, Budget& budget);

  const Signature& base() const { return base_; }
  int k() const { return base_.k; }
  // Coefficient vector of the degree-j component of g in height-1 form.
  Vec coeff_vector(int j, const Translation& g) const;
  std::size_t coeff_dim(int j) const { return monos_[j].size() * width_[j]; }
  std::size_t width(int j) const { return width_[j]; }
  const std::vector<MultiIndex>& monomials(int j) const { return monos_[j]; }
  // Top-degree-only translation with the given degree-k coefficients.
  Translation top_element(const Vec& v) const;

  const std::vector<Translation>& reps(int j) const { return reps_[j]; }
  const Lattice& lattice(int j) const { return lat_[j]; }
  // V_j cap constants, as vectors on the A_j coordinates.
  Lattice constants(int j) const;

  bool contains(const Translation& g) const;
  bool layer_constant(int j) const;
  bool lower_layers_constant() const;
  bool lowest_terms_constant() const { return lower_layers_constant() && layer_constant(k()); }
  // Canonical orbit representative; needs lower_layers_constant().
  Point representative(const Point& x) const;

 private:
  Translation sift(Translation g, int& layer) const;
  void insert_lower(int j, Translation g, std::vector<std::pair<Translation, bool>>& queue);
  std::vector<Translation> all_reps() const;

  Signature base_;
  std::vector<std::vector<MultiIndex>> monos_;
  std::vector<std::size_t> width_;
  std::vector<std::vector<Translation>> reps_;  // reps_[j] aligned with lat_[j].rows() for j < k
  std::vector<Lattice> lat_;
  Budget* budget_;
};

struct QuotientResult {
  FtReport ft;
  std::vector<AbelianInvariants> structure_groups;  // degree i at index i-1
  bool finite = false;
  std::vector<Point> representatives;               // quotient points when finite
  std::shared_ptr<MaterializedCubespace> cubespace; // image cubes up to dim_cap
  int period = 0;                                   // finite realization of a free base
};

struct AxiomCheck {
  bool ok = true;
  std::vector<PointId> witness;  // offending cube or corner
  std::string detail;
};

struct AxiomReport {
  AxiomCheck ergodicity, composition, corner_completion, uniqueness;
  bool ok() const { return ergodicity.ok && composition.ok && corner_completion.ok && uniqueness.ok; }
};

std::optional<std::string> candidate_violation(const CongruenceCandidate& c);

FtReport check_fiber_transitive(const CongruenceCandidate& c, Budget& budget);
QuotientResult quotient(const CongruenceCandidate& c, Budget& budget, int dim_cap = -1);
// The image cube sets of the orbit relation, without any fiber-transitivity check.
std::shared_ptr<MaterializedCubespace> orbit_image_cubespace(const CongruenceCandidate& c, Budget& budget,
                                                             int dim_cap = -1);
// Same points as the orbit list, so callers can label witnesses.
std::vector<Point> orbit_representatives(const CongruenceCandidate& c, Budget& budget);

// Exhaustive up to dimension d; the uniqueness check runs at dimension step()+1 when d allows.
AxiomReport verify_nilspace_axioms(const FiniteCubespace& space, int d, Budget& budget);
// Concatenations of adjacent image cubes that are not cubes.
std::optional<std::vector<PointId>> gluing_failure(const FiniteCubespace& space, int n, Budget& budget);
std::optional<std::vector<PointId>> find_isomorphism(const FiniteCubespace& a, const FiniteCubespace& b, int d,
                                                     Budget& budget);

// Every element has a constant lowest nonzero component.
bool lowest_terms_constant(const CongruenceCandidate& c, Budget& budget);
// lowest_terms_constant and fiber-transitive.
bool is_free_fiber_transitive(const CongruenceCandidate& c, Budget& budget);
// Finite base: every element of H acting without fixed points.
bool acts_freely(const CongruenceCandidate& c, Budget& budget);

// Finite base: all translations moving each point within its H-orbit, and a generating subset.
std::vector<Translation> fiber_transitive_closure_elements(const CongruenceCandidate& c, Budget& budget);
CongruenceCandidate fiber_transitive_closure(const CongruenceCandidate& c, Budget& budget);
bool filtrations_equivalent(const CongruenceCandidate& a, const CongruenceCandidate& b, Budget& budget,
                            int dim_cap = -1);
// eta_j(H_bullet) on the j-step factor.
CongruenceCandidate factor_candidate(const CongruenceCandidate& c, int j);
// Finite base: eta_i(H_i) inside A_i, as the subgroup of shift vectors.
std::vector<Element> structure_shifts(const CongruenceCandidate& c, int i, Budget& budget);

struct ClosureEmbedding {
  Signature closure;
  std::vector<Translation> iota;
  std::vector<Point> representatives;  // of the orbits of H on F
  std::vector<Point> images;           // their iota(H)-representatives in F*
  bool injective = true;
  bool sample_agrees = true;           // x ~_H y iff phi(x) ~ phi(y) on the sample box
};
ClosureEmbedding continuous_closure_embed(const CongruenceCandidate& c, Budget& budget, int sample_side = 3);

}  // namespace nilspace
