#include <algorithm>
#include <functional>
#include <map>

#include "nilspace/congruence.hpp"
#include "nilspace/error.hpp"

namespace nilspace {

namespace {

std::vector<std::vector<PointId>> sorted_cubes(const FiniteCubespace& space, int n, Budget& budget) {
  CubeList list = enumerate_cubes(space, n, budget);
  std::vector<std::vector<PointId>> out;
  out.reserve(list.count());
  for (std::size_t i = 0; i < list.count(); ++i) out.push_back(list.cube_vec(i));
  std::sort(out.begin(), out.end());
  return out;
}

// Visits every n-corner (vertex 1^n left unassigned) in lexicographic order of
// the values at vertices 0, 1, 2, ...; the visitor returns false to stop.
bool for_each_corner(const FiniteCubespace& space, int n, Budget& budget,
                     const std::function<bool(std::vector<PointId>&)>& visit) {
  Vertex top = top_vertex(n);
  std::vector<PointId> q(std::size_t(1) << n, 0);
  std::vector<std::vector<Face>> checks(top);
  for (Vertex v = 1; v < top; ++v) checks[v] = faces_with_top(v);
  std::vector<PointId> buf;
  std::function<bool(Vertex)> rec = [&](Vertex v) -> bool {
    if (v == top) return visit(q);
    for (PointId p = 0; p < space.size(); ++p) {
      budget.charge();
      q[v] = p;
      bool ok = true;
      for (const auto& f : checks[v]) {
        buf.resize(f.vertices.size());
        for (std::size_t t = 0; t < f.vertices.size(); ++t) buf[t] = q[f.vertices[t]];
        if (!space.is_cube(buf.data(), f.dim)) {
          ok = false;
          break;
        }
      }
      if (ok && !rec(v + 1)) return false;
    }
    return true;
  };
  if (n == 0) return visit(q);
  return rec(0);
}

}  // namespace

AxiomReport verify_nilspace_axioms(const FiniteCubespace& space, int d, Budget& budget) {
  AxiomReport rep;
  std::size_t N = space.size();
  for (PointId a = 0; a < N && rep.ergodicity.ok; ++a)
    for (PointId b = 0; b < N; ++b) {
      budget.charge();
      PointId q[2] = {a, b};
      if (!space.is_cube(q, 1)) {
        rep.ergodicity = {false, {a, b}, "pair is not a 1-cube"};
        break;
      }
    }

  for (int n = 0; n <= d && rep.composition.ok; ++n) {
    auto cubes = sorted_cubes(space, n, budget);
    for (int m = 0; m <= d && rep.composition.ok; ++m) {
      auto morphs = cube_morphisms(m, n);
      std::vector<PointId> img(std::size_t(1) << m);
      for (const auto& q : cubes) {
        for (const auto& phi : morphs) {
          budget.charge();
          for (Vertex v = 0; v < img.size(); ++v) img[v] = q[phi.apply(v)];
          if (!space.is_cube(img.data(), m)) {
            std::string code;
            for (int c : phi.codes) code += std::to_string(c) + " ";
            rep.composition = {false, q, "cube composed with morphism [" + code + "] into dimension " +
                                             std::to_string(m) + " is not a cube"};
            break;
          }
        }
        if (!rep.composition.ok) break;
      }
    }
  }

  int k = space.step();
  for (int n = 1; n <= d && rep.corner_completion.ok; ++n) {
    bool check_unique = (n == k + 1) && rep.uniqueness.ok;
    Vertex top = top_vertex(n);
    for_each_corner(space, n, budget, [&](std::vector<PointId>& q) {
      std::size_t found = 0;
      for (PointId p = 0; p < space.size(); ++p) {
        budget.charge();
        q[top] = p;
        if (space.is_cube(q.data(), n)) ++found;
        if (found > 1 && !check_unique) break;
      }
      if (found == 0) {
        std::vector<PointId> w(q.begin(), q.end() - 1);
        rep.corner_completion = {false, w, std::to_string(n) + "-corner has no completion"};
        return false;
      }
      if (check_unique && found > 1 && rep.uniqueness.ok) {
        std::vector<PointId> w(q.begin(), q.end() - 1);
        rep.uniqueness = {false, w, std::to_string(n) + "-corner has " + std::to_string(found) + " completions"};
      }
      return true;
    });
  }
  return rep;
}

std::optional<std::vector<PointId>> gluing_failure(const FiniteCubespace& space, int n, Budget& budget) {
  if (n < 1) fail(ErrorKind::Invalid, "gluing needs dimension at least 1");
  auto cubes = sorted_cubes(space, n, budget);
  std::size_t half = std::size_t(1) << (n - 1);
  std::map<std::vector<PointId>, std::vector<std::size_t>> by_lower;
  for (std::size_t i = 0; i < cubes.size(); ++i)
    by_lower[std::vector<PointId>(cubes[i].begin(), cubes[i].begin() + half)].push_back(i);
  std::vector<PointId> glued(2 * half);
  for (const auto& a : cubes) {
    std::vector<PointId> upper(a.begin() + half, a.end());
    auto it = by_lower.find(upper);
    if (it == by_lower.end()) continue;
    for (auto bi : it->second) {
      budget.charge();
      const auto& b = cubes[bi];
      std::copy(a.begin(), a.begin() + half, glued.begin());
      std::copy(b.begin() + half, b.end(), glued.begin() + half);
      if (!space.is_cube(glued.data(), n)) return glued;
    }
  }
  return std::nullopt;
}

std::optional<std::vector<PointId>> find_isomorphism(const FiniteCubespace& a, const FiniteCubespace& b, int d,
                                                     Budget& budget) {
  std::size_t N = a.size();
  if (b.size() != N) return std::nullopt;
  // cubes of a bucketed by their largest point, for pruning as points get assigned
  std::vector<std::vector<std::pair<int, std::vector<PointId>>>> bucket(N);
  for (int n = 1; n <= d; ++n) {
    CubeList ca = enumerate_cubes(a, n, budget), cb = enumerate_cubes(b, n, budget);
    if (ca.count() != cb.count()) return std::nullopt;
    CubeSet seen;
    for (std::size_t i = 0; i < ca.count(); ++i) {
      auto q = ca.cube_vec(i);
      if (!seen.insert(q).second) continue;
      PointId mx = *std::max_element(q.begin(), q.end());
      bucket[mx].push_back({n, std::move(q)});
    }
  }
  std::vector<PointId> phi(N);
  std::vector<bool> used(N, false);
  std::vector<PointId> img;
  std::function<bool(PointId)> rec = [&](PointId p) -> bool {
    if (p == N) return true;
    for (PointId t = 0; t < N; ++t) {
      if (used[t]) continue;
      budget.charge();
      phi[p] = t;
      bool ok = true;
      for (const auto& [n, q] : bucket[p]) {
        img.resize(q.size());
        for (std::size_t v = 0; v < q.size(); ++v) img[v] = phi[q[v]];
        if (!b.is_cube(img.data(), n)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      used[t] = true;
      if (rec(p + 1)) return true;
      used[t] = false;
    }
    return false;
  };
  if (!rec(0)) return std::nullopt;
  return phi;
}

}  // namespace nilspace
