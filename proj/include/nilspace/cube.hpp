#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "nilspace/group.hpp"

namespace nilspace {

// Vertex v of {0,1}^n is the bitmask sum_i v_i 2^(i-1).
using Vertex = std::uint32_t;

inline int height(Vertex v) { return std::popcount(v); }
inline Vertex top_vertex(int n) { return (Vertex(1) << n) - 1; }

// Scatter the low bits of `local` into the set bits of `mask`.
Vertex deposit(Vertex local, Vertex mask);

struct Face {
  Vertex base = 0;  // fixed coordinates set to 1
  Vertex free = 0;  // free coordinates
  int dim = 0;
  std::vector<Vertex> vertices;  // indexed by local vertex
};

const std::vector<Face>& faces(int n, int dim);
// Faces whose vertex of largest index is `top`, of dimension >= 1.
std::vector<Face> faces_with_top(Vertex top);
// Faces whose vertex of smallest index is `bottom`, inside {0,1}^n, dimension >= 1.
std::vector<Face> faces_with_bottom(Vertex bottom, int n);
Face make_face(Vertex base, Vertex free);

template <class T>
struct CubeMap {
  int n = 0;
  std::vector<T> values;  // size 2^n
};

template <class T>
struct CornerMap {
  int n = 0;
  std::vector<T> values;  // size 2^n - 1, vertex 1^n omitted
};

// sum over v of (-1)^|v| r(v) on {0,1}^dim.
Element sigma(const Kinds& kinds, const std::vector<Element>& r);
bool is_cube_degree_k(const Kinds& kinds, int k, const CubeMap<Element>& q);
// First (k+1)-face with nonzero sigma, or nullptr-like (-1) if q is a cube.
long first_bad_face(const Kinds& kinds, int k, const CubeMap<Element>& q);
CubeMap<Element> complete_corner(const Kinds& kinds, int k, const CornerMap<Element>& c);

// Integer fast path; values taken modulo m, or exactly when m == 0.
bool gray_cube(int k, int n, const std::int64_t* vals, std::int64_t m);

// Morphism of discrete cubes {0,1}^m -> {0,1}^n: each output coordinate is
// 0, 1, v_i or 1 - v_i.  Code 0 and 1 are constants, 2+2i is v_i, 3+2i is 1-v_i.
struct CubeMorphism {
  int m = 0;
  std::vector<int> codes;  // length n
  Vertex apply(Vertex v) const;
};
std::vector<CubeMorphism> cube_morphisms(int m, int n);

}  // namespace nilspace
