#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nilspace/cubespace.hpp"
#include "nilspace/filtered_group.hpp"
#include "nilspace/translation.hpp"

namespace nilspace {

using Subgroup = std::vector<GroupElem>;  // sorted element list

std::optional<std::string> subgroup_violation(const FilteredGroup& g, const Subgroup& s);
Subgroup generated_subgroup(const FilteredGroup& g, const std::vector<GroupElem>& gens);
// Every subgroup of a small group, each as a sorted element list, in lexicographic order.
std::vector<Subgroup> all_subgroups(const FilteredGroup& g);

struct NilpairWitness {
  GroupElem x = 0;
  int i = 0;
};
struct NilpairReport {
  bool holds = true;
  std::optional<NilpairWitness> witness;  // least x, then least i
};

// which = 1: (KxG) cap (G_i x G) = (K cap G_i) x G.
// which = 2: (KxG) cap (K x G_i) = K x (G cap G_i), with G standing for Gamma.
NilpairReport nilpair_condition(const FilteredGroup& g, const Subgroup& K, const Subgroup& Gamma, int which);

// K\G/Gamma with cubes K q Gamma for q Host-Kra cubes of G. Cube sets are listed up
// to the cap; above it membership is decided by searching for a lifted cube.
class DoubleCosetSpace : public FiniteCubespace {
 public:
  DoubleCosetSpace(const FilteredGroup& g, Subgroup K, Subgroup Gamma, Budget& budget, int cap = -1);

  std::size_t size() const override { return reps_.size(); }
  int step() const override { return g_.degree(); }
  bool is_cube(const PointId* q, int n) const override;
  using FiniteCubespace::is_cube;
  bool for_each_cube_fast(int n, Budget& budget, const CubeVisitor& visit) const override;
  std::string label(PointId p) const override { return g_.label(reps_[p]); }

  const FilteredGroup& group() const { return g_; }
  const Subgroup& K() const { return K_; }
  const Subgroup& Gamma() const { return Gamma_; }
  PointId coset_of(GroupElem x) const { return coset_[x]; }
  GroupElem representative(PointId p) const { return reps_[p]; }  // least element
  const std::vector<GroupElem>& members(PointId p) const { return members_[p]; }
  int cap() const { return cap_; }
  // True when condition (ii) holds.
  bool groupable() const { return groupable_; }

 private:
  FilteredGroup g_;
  Subgroup K_, Gamma_;
  std::vector<PointId> coset_;
  std::vector<GroupElem> reps_;
  std::vector<std::vector<GroupElem>> members_;
  std::vector<CubeSet> sets_;
  int cap_;
  bool groupable_ = false;
};

// Tran(F) with its filtration Tran_i, as a filtered group on point permutations.
struct TranslationGroupTable {
  FilteredGroup group;
  std::vector<std::vector<PointId>> perms;  // element index -> permutation of F
  std::vector<Translation> translations;
};
TranslationGroupTable translation_group_table(const Signature& space, Budget& budget);

struct StabilizerReport {
  std::size_t tran_order = 0, stabilizer_order = 0, cosets = 0, points = 0;
  bool bijective = false;
  bool cubes_forward = false;   // psi o (Kq) is a cube of F
  bool cubes_backward = false;  // every cube of F arises
  bool equivariant = false;
  int dim = 0;
  std::vector<std::size_t> cube_counts;  // cubes of F per dimension 0..dim
  std::vector<PointId> witness;
  bool ok() const { return bijective && cubes_forward && cubes_backward && equivariant; }
};
// psi: K\Tran(F) -> F, Kg -> g^-1(f0), with K the stabilizer of f0 (default the zero point).
StabilizerReport stabilizer_representation(const Signature& space, Budget& budget, int dim = -1,
                                           const std::optional<Point>& f0 = std::nullopt);

struct HeisenbergReport {
  bool points_bijective = true;
  bool cubes_forward = true;
  bool cubes_backward = true;
  bool generators_match = true;
  bool tran_isomorphism = true;
  std::vector<std::uint64_t> checked;  // cubes checked per dimension
  std::string failure;
  bool ok() const { return points_bijective && cubes_forward && cubes_backward && generators_match && tran_isomorphism; }
};
// phi(x,y,z) = [[1,x,z],[0,1,y],[0,0,1]] from D_1(A^2) x D_2(A) to the Heisenberg group.
// Over Z_m: exhaustive for n <= exhaustive_dim, sampled above up to dim.
HeisenbergReport heisenberg_check_modular(int modulus, int dim, int exhaustive_dim, int samples, unsigned seed,
                                          Budget& budget);
// Over Q: cubes with parameters drawn from the grid of values, both directions, plus
// the isomorphism gamma_{a,b,c} -> [[1,c,b],[0,1,a],[0,0,1]] of Tran(D_1(Q) x D_2(Q)).
HeisenbergReport heisenberg_check_rational(const std::vector<Rational>& grid, int dim, int samples, unsigned seed);

}  // namespace nilspace
