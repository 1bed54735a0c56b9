#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "nilspace/cube.hpp"
#include "nilspace/filtered_group.hpp"
#include "nilspace/group.hpp"

namespace nilspace {

using PointId = std::uint32_t;

struct VecHash {
  std::size_t operator()(const std::vector<PointId>& v) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (auto x : v) {
      h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};
using CubeSet = std::unordered_set<std::vector<PointId>, VecHash>;

// Flat list of n-cubes, 2^n point ids each.
struct CubeList {
  int n = 0;
  std::vector<PointId> data;
  std::size_t count() const { return data.size() >> n; }
  const PointId* cube(std::size_t i) const { return data.data() + (i << n); }
  std::vector<PointId> cube_vec(std::size_t i) const {
    return std::vector<PointId>(cube(i), cube(i) + (std::size_t(1) << n));
  }
};

constexpr std::uint64_t kDefaultBudget = 10'000'000;

struct Budget {
  std::uint64_t limit = kDefaultBudget;
  std::uint64_t used = 0;
  void charge(std::uint64_t c = 1);
};

// Return false to stop the enumeration.
using CubeVisitor = std::function<bool(const PointId*)>;

class FiniteCubespace {
 public:
  virtual ~FiniteCubespace() = default;
  virtual std::size_t size() const = 0;
  virtual int step() const = 0;
  virtual bool is_cube(const PointId* q, int n) const = 0;
  // Streams the n-cubes when the space has a direct enumeration; returns false otherwise.
  virtual bool for_each_cube_fast(int /*n*/, Budget& /*budget*/, const CubeVisitor& /*visit*/) const {
    return false;
  }
  virtual std::string label(PointId p) const { return std::to_string(p); }
  // Equal keys iff the points have the same image in the j-step factor.
  virtual std::optional<std::uint64_t> factor_key(PointId /*p*/, int /*j*/) const { return std::nullopt; }
  bool is_cube(const std::vector<PointId>& q) const;
};

CubeList enumerate_cubes(const FiniteCubespace& space, int n, Budget& budget);
// Returns false if the visitor stopped early.
bool for_each_cube(const FiniteCubespace& space, int n, Budget& budget, const CubeVisitor& visit);
// Backtracking over vertices in index order, pruning on faces as they fill up.
CubeList enumerate_cubes_bruteforce(const FiniteCubespace& space, int n, Budget& budget);
bool for_each_cube_bruteforce(const FiniteCubespace& space, int n, Budget& budget, const CubeVisitor& visit);

// Finite product prod_i D_i(A_i): residue slots, or integer slots restricted to a box.
class ProductNilspace : public FiniteCubespace {
 public:
  explicit ProductNilspace(const Signature& sig);
  // Integer and residue slots; integer coordinates range over [0, side).
  static ProductNilspace integer_box(const Signature& sig, int side);

  std::size_t size() const override { return size_; }
  int step() const override { return sig_.k; }
  bool is_cube(const PointId* q, int n) const override;
  using FiniteCubespace::is_cube;
  bool for_each_cube_fast(int n, Budget& budget, const CubeVisitor& visit) const override;
  std::string label(PointId p) const override;
  std::optional<std::uint64_t> factor_key(PointId p, int j) const override;

  const Signature& signature() const { return sig_; }
  bool is_box() const { return box_; }
  PointId index_of(const Point& p) const;
  Point point(PointId id) const;
  const std::int64_t* coords(PointId id) const { return coords_.data() + std::size_t(id) * sig_.dim(); }
  std::int64_t radix(std::size_t slot) const { return radix_[slot]; }
  std::int64_t modulus(std::size_t slot) const { return mod_[slot]; }

 private:
  ProductNilspace() = default;
  void build();
  Signature sig_;
  bool box_ = false;
  std::vector<std::int64_t> radix_, mod_, stride_;
  std::vector<std::int64_t> coords_;
  std::size_t size_ = 0;
};

// Group nilspace of a finite filtered group, with Host-Kra cubes.
class GroupNilspace : public FiniteCubespace {
 public:
  explicit GroupNilspace(const FilteredGroup& g) : g_(g) {}
  std::size_t size() const override { return g_.order(); }
  int step() const override { return g_.degree(); }
  bool is_cube(const PointId* q, int n) const override;
  using FiniteCubespace::is_cube;
  bool for_each_cube_fast(int n, Budget& budget, const CubeVisitor& visit) const override;
  std::string label(PointId p) const override { return g_.label(p); }
  std::optional<std::uint64_t> factor_key(PointId p, int j) const override;
  const FilteredGroup& group() const { return g_; }

 private:
  FilteredGroup g_;
};

// Point set with explicitly listed cubes up to a dimension cap.
class MaterializedCubespace : public FiniteCubespace {
 public:
  MaterializedCubespace(std::size_t points, int step, int cap) : n_(points), k_(step), cap_(cap), sets_(cap + 1) {}
  std::size_t size() const override { return n_; }
  int step() const override { return k_; }
  int cap() const { return cap_; }
  bool is_cube(const PointId* q, int n) const override;
  using FiniteCubespace::is_cube;
  bool for_each_cube_fast(int n, Budget& budget, const CubeVisitor& visit) const override;
  std::string label(PointId p) const override;
  void add(const std::vector<PointId>& q);
  void set_labels(std::vector<std::string> labels) { labels_ = std::move(labels); }
  std::size_t cube_count(int n) const { return sets_.at(n).size(); }
  const CubeSet& cubes(int n) const { return sets_.at(n); }

 private:
  std::size_t n_;
  int k_;
  int cap_;
  std::vector<CubeSet> sets_;
  std::vector<std::string> labels_;
};

// Counts of n-cubes in one D_i(Z_m) slot: m^(sum_{j<=i} C(n,j)).
std::uint64_t slot_cube_count(int degree, std::uint64_t modulus, int n);

}  // namespace nilspace
