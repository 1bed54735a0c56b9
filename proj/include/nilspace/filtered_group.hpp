#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nilspace/cube.hpp"

namespace nilspace {

using GroupElem = std::uint32_t;

// Finite group with a filtration G = G_0 = G_1 >= G_2 >= ... >= G_{k+1} = {e},
// stored as a multiplication table.
class FilteredGroup {
 public:
  FilteredGroup() = default;
  // layers[i-1] lists the elements of G_i for i = 1..k (layers[0] must be everything).
  FilteredGroup(std::vector<std::vector<GroupElem>> table, std::vector<std::vector<GroupElem>> layers,
                std::vector<std::string> labels = {}, bool check_associativity = true);

  static FilteredGroup unitriangular(int size, int modulus);
  static FilteredGroup abelian_cyclic(int modulus, int degree);

  std::size_t order() const { return table_.size(); }
  int degree() const { return k_; }
  GroupElem identity() const { return e_; }
  GroupElem mul(GroupElem a, GroupElem b) const { return table_[a][b]; }
  GroupElem inv(GroupElem a) const { return inv_[a]; }
  bool in(GroupElem a, int i) const;
  const std::vector<GroupElem>& layer(int i) const;
  const std::string& label(GroupElem a) const { return labels_[a]; }
  GroupElem commutator(GroupElem a, GroupElem b) const;

  // Checks the filtration axioms: subgroups, nested, [G_i,G_j] <= G_{i+j}.
  std::optional<std::string> validate() const;
  std::vector<GroupElem> generate(const std::vector<GroupElem>& gens) const;

 private:
  std::vector<std::vector<GroupElem>> table_;
  std::vector<GroupElem> inv_;
  std::vector<std::vector<GroupElem>> layers_;
  std::vector<std::vector<char>> member_;
  std::vector<std::string> labels_;
  std::vector<GroupElem> trivial_;
  GroupElem e_ = 0;
  int k_ = 0;
};

// Host-Kra cube membership: peel q from the right in height order and check that
// each peeled factor lies in G_{|v|}.  Returns the first offending vertex.
template <class G, class E>
std::optional<Vertex> hk_first_failure(const G& group, std::vector<E> q, int n) {
  std::vector<Vertex> order(std::size_t(1) << n);
  for (Vertex v = 0; v < order.size(); ++v) order[v] = v;
  std::stable_sort(order.begin(), order.end(),
                   [](Vertex a, Vertex b) { return height(a) < height(b); });
  for (Vertex v : order) {
    E g = q[v];
    if (!group.in(g, height(v))) return v;
    E gi = group.inv(g);
    for (Vertex w = 0; w < q.size(); ++w)
      if ((w & v) == v) q[w] = group.mul(q[w], gi);
  }
  return std::nullopt;
}

bool hk_cube_membership(const FilteredGroup& g, const CubeMap<GroupElem>& q);

// Enumerates cu^n(G) through the normal form prod_v g_v^{F_v}, g_v in G_{|v|}.
// Calls visit for each cube; stops early when visit returns false.
void for_each_hk_cube(const FilteredGroup& g, int n,
                      const std::function<bool(const std::vector<GroupElem>&)>& visit);
std::uint64_t hk_cube_count(const FilteredGroup& g, int n);

}  // namespace nilspace
