#include "nilspace/cube.hpp"

#include <array>

#include "nilspace/error.hpp"

namespace nilspace {

Vertex deposit(Vertex local, Vertex mask) {
  Vertex out = 0;
  for (Vertex bit = 1; mask; bit <<= 1) {
    Vertex low = mask & (~mask + 1);
    if (local & bit) out |= low;
    mask &= mask - 1;
  }
  return out;
}

Face make_face(Vertex base, Vertex free) {
  Face f;
  f.base = base & ~free;
  f.free = free;
  f.dim = std::popcount(free);
  f.vertices.resize(std::size_t(1) << f.dim);
  for (Vertex u = 0; u < f.vertices.size(); ++u) f.vertices[u] = f.base | deposit(u, free);
  return f;
}

static std::vector<Face> build_faces(int n, int dim) {
  std::vector<Face> out;
  Vertex all = top_vertex(n);
  for (Vertex free = 0; free <= all; ++free) {
    if (std::popcount(free) != dim) continue;
    Vertex rest = all & ~free;
    // iterate subsets of rest as the fixed-one coordinates
    Vertex sub = 0;
    while (true) {
      out.push_back(make_face(sub, free));
      if (sub == rest) break;
      sub = (sub - rest) & rest;
    }
  }
  return out;
}

const std::vector<Face>& faces(int n, int dim) {
  constexpr int kMax = 8;
  if (n < 0 || dim < 0 || dim > n) fail(ErrorKind::DimensionMismatch, "bad face request");
  if (n > kMax) {
    thread_local std::vector<Face> scratch;
    scratch = build_faces(n, dim);
    return scratch;
  }
  static const auto table = [] {
    std::array<std::array<std::vector<Face>, kMax + 1>, kMax + 1> t;
    for (int a = 0; a <= kMax; ++a)
      for (int b = 0; b <= a; ++b) t[a][b] = build_faces(a, b);
    return t;
  }();
  return table[n][dim];
}

std::vector<Face> faces_with_top(Vertex top) {
  std::vector<Face> out;
  for (Vertex s = top; s; s = (s - 1) & top) out.push_back(make_face(top, s));
  return out;
}

std::vector<Face> faces_with_bottom(Vertex bottom, int n) {
  std::vector<Face> out;
  Vertex zeros = top_vertex(n) & ~bottom;
  for (Vertex s = zeros; s; s = (s - 1) & zeros) out.push_back(make_face(bottom, s));
  return out;
}

Element sigma(const Kinds& kinds, const std::vector<Element>& r) {
  std::size_t len = r.size();
  if (len == 0 || (len & (len - 1))) fail(ErrorKind::DimensionMismatch, "sigma needs 2^n values");
  Element acc = zero_element(kinds);
  for (Vertex v = 0; v < len; ++v) acc = (height(v) % 2) ? sub(kinds, acc, r[v]) : add(kinds, acc, r[v]);
  return acc;
}

static void check_cube_shape(const Kinds& kinds, const std::vector<Element>& vals, std::size_t expect) {
  if (vals.size() != expect) fail(ErrorKind::DimensionMismatch, "cube has wrong number of vertices");
  for (const auto& e : vals)
    if (e.size() != kinds.size()) fail(ErrorKind::DimensionMismatch, "vertex value has wrong rank");
}

long first_bad_face(const Kinds& kinds, int k, const CubeMap<Element>& q) {
  check_cube_shape(kinds, q.values, std::size_t(1) << q.n);
  if (q.n <= k) return -1;
  const auto& fs = faces(q.n, k + 1);
  for (std::size_t f = 0; f < fs.size(); ++f) {
    Element acc = zero_element(kinds);
    for (Vertex u = 0; u < fs[f].vertices.size(); ++u) {
      const Element& x = q.values[fs[f].vertices[u]];
      acc = (height(u) % 2) ? sub(kinds, acc, x) : add(kinds, acc, x);
    }
    if (!is_zero(acc)) return static_cast<long>(f);
  }
  return -1;
}

bool is_cube_degree_k(const Kinds& kinds, int k, const CubeMap<Element>& q) {
  return first_bad_face(kinds, k, q) < 0;
}

CubeMap<Element> complete_corner(const Kinds& kinds, int k, const CornerMap<Element>& c) {
  int n = c.n;
  std::size_t full = std::size_t(1) << n;
  check_cube_shape(kinds, c.values, full - 1);
  CubeMap<Element> q{n, c.values};
  if (n <= k) {
    q.values.push_back(c.values.empty() ? zero_element(kinds) : c.values[0]);
    return q;
  }
  // every lower face (v_i = 0) must already be a cube
  for (int i = 0; i < n; ++i) {
    Face f = make_face(0, top_vertex(n) & ~(Vertex(1) << i));
    CubeMap<Element> lower{n - 1, {}};
    for (Vertex v : f.vertices) lower.values.push_back(c.values[v]);
    if (!is_cube_degree_k(kinds, k, lower))
      fail(ErrorKind::DimensionMismatch, "corner has a lower face that is not a cube");
  }
  // solve sigma = 0 on the (k+1)-face spanned by the last k+1 coordinates
  Vertex top = top_vertex(n);
  Vertex free = top & ~top_vertex(n - k - 1);
  Face f = make_face(top, free);
  Element acc = zero_element(kinds);
  for (Vertex u = 0; u + 1 < f.vertices.size(); ++u) {
    const Element& x = c.values[f.vertices[u]];
    acc = (height(u) % 2) ? sub(kinds, acc, x) : add(kinds, acc, x);
  }
  // (-1)^(k+1) z + acc = 0
  Element z = ((k + 1) % 2) ? acc : neg(kinds, acc);
  q.values.push_back(z);
  return q;
}

bool gray_cube(int k, int n, const std::int64_t* vals, std::int64_t m) {
  if (n <= k) return true;
  for (const Face& f : faces(n, k + 1)) {
    std::int64_t acc = 0;
    for (Vertex u = 0; u < f.vertices.size(); ++u)
      acc += (height(u) % 2) ? -vals[f.vertices[u]] : vals[f.vertices[u]];
    if (m ? (acc % m != 0) : (acc != 0)) return false;
  }
  return true;
}

Vertex CubeMorphism::apply(Vertex v) const {
  Vertex out = 0;
  for (std::size_t j = 0; j < codes.size(); ++j) {
    int c = codes[j];
    bool bit;
    if (c < 2) bit = c == 1;
    else {
      int i = (c - 2) / 2;
      bit = ((v >> i) & 1u) != 0;
      if ((c - 2) % 2) bit = !bit;
    }
    if (bit) out |= Vertex(1) << j;
  }
  return out;
}

std::vector<CubeMorphism> cube_morphisms(int m, int n) {
  std::vector<CubeMorphism> out;
  int choices = 2 + 2 * m;
  std::vector<int> codes(n, 0);
  while (true) {
    out.push_back({m, codes});
    int j = 0;
    while (j < n && ++codes[j] == choices) codes[j++] = 0;
    if (j == n) break;
  }
  return out;
}

}  // namespace nilspace
