#include "nilspace/filtered_group.hpp"

#include <algorithm>
#include <map>

#include "nilspace/error.hpp"

namespace nilspace {

FilteredGroup::FilteredGroup(std::vector<std::vector<GroupElem>> table,
                             std::vector<std::vector<GroupElem>> layers,
                             std::vector<std::string> labels, bool check_associativity)
    : table_(std::move(table)), layers_(std::move(layers)), labels_(std::move(labels)) {
  std::size_t n = table_.size();
  if (n == 0) fail(ErrorKind::Invalid, "empty group table");
  for (const auto& row : table_) {
    if (row.size() != n) fail(ErrorKind::Invalid, "group table is not square");
    for (auto x : row)
      if (x >= n) fail(ErrorKind::Invalid, "group table entry out of range");
  }
  bool found = false;
  for (GroupElem a = 0; a < n && !found; ++a) {
    bool ok = true;
    for (GroupElem b = 0; b < n && ok; ++b) ok = table_[a][b] == b && table_[b][a] == b;
    if (ok) {
      e_ = a;
      found = true;
    }
  }
  if (!found) fail(ErrorKind::Invalid, "group table has no identity");
  inv_.assign(n, n);
  for (GroupElem a = 0; a < n; ++a)
    for (GroupElem b = 0; b < n; ++b)
      if (table_[a][b] == e_) inv_[a] = b;
  for (auto x : inv_)
    if (x >= n) fail(ErrorKind::Invalid, "group table has an element without inverse");
  if (check_associativity)
  for (GroupElem a = 0; a < n; ++a)
    for (GroupElem b = 0; b < n; ++b)
      for (GroupElem c = 0; c < n; ++c)
        if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
          fail(ErrorKind::Invalid, "group table is not associative");
  if (layers_.empty()) {
    layers_.push_back({});
    for (GroupElem a = 0; a < n; ++a) layers_[0].push_back(a);
  }
  k_ = static_cast<int>(layers_.size());
  member_.assign(layers_.size(), std::vector<char>(n, 0));
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    std::sort(layers_[i].begin(), layers_[i].end());
    for (auto x : layers_[i]) {
      if (x >= n) fail(ErrorKind::Invalid, "filtration element out of range");
      member_[i][x] = 1;
    }
  }
  if (layers_[0].size() != n) fail(ErrorKind::Invalid, "G_1 must be the whole group");
  // trailing trivial layers do not raise the degree
  while (k_ > 1 && layers_[k_ - 1].size() == 1) --k_;
  if (k_ == 1 && n == 1) k_ = 0;
  trivial_ = {e_};
  if (labels_.size() != n) {
    labels_.clear();
    for (GroupElem a = 0; a < n; ++a) labels_.push_back(std::to_string(a));
  }
}

bool FilteredGroup::in(GroupElem a, int i) const {
  if (i <= 1) return true;
  if (i > static_cast<int>(layers_.size())) return a == e_;
  return member_[i - 1][a] != 0;
}

const std::vector<GroupElem>& FilteredGroup::layer(int i) const {
  if (i <= 1) return layers_[0];
  if (i > static_cast<int>(layers_.size())) return trivial_;
  return layers_[i - 1];
}

GroupElem FilteredGroup::commutator(GroupElem a, GroupElem b) const {
  return mul(mul(inv(a), inv(b)), mul(a, b));
}

std::vector<GroupElem> FilteredGroup::generate(const std::vector<GroupElem>& gens) const {
  std::vector<char> seen(order(), 0);
  std::vector<GroupElem> out{e_};
  seen[e_] = 1;
  for (std::size_t i = 0; i < out.size(); ++i)
    for (auto g : gens) {
      GroupElem x = mul(out[i], g);
      if (!seen[x]) {
        seen[x] = 1;
        out.push_back(x);
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<std::string> FilteredGroup::validate() const {
  int depth = static_cast<int>(layers_.size());
  for (int i = 1; i <= depth; ++i) {
    const auto& L = layer(i);
    if (generate(L) != L) return "G_" + std::to_string(i) + " is not a subgroup";
    if (i > 1)
      for (auto x : L)
        if (!in(x, i - 1)) return "G_" + std::to_string(i) + " is not contained in G_" + std::to_string(i - 1);
  }
  for (int i = 1; i <= depth; ++i)
    for (int j = 1; j <= depth; ++j)
      for (auto a : layer(i))
        for (auto b : layer(j))
          if (!in(commutator(a, b), i + j))
            return "[G_" + std::to_string(i) + ",G_" + std::to_string(j) + "] not in G_" +
                   std::to_string(i + j);
  return std::nullopt;
}

FilteredGroup FilteredGroup::unitriangular(int size, int modulus) {
  if (size < 2 || modulus < 2) fail(ErrorKind::Invalid, "unitriangular needs size >= 2, modulus >= 2");
  // entries above the diagonal, ordered by superdiagonal then row
  std::vector<std::pair<int, int>> pos;
  for (int d = 1; d < size; ++d)
    for (int r = 0; r + d < size; ++r) pos.push_back({r, r + d});
  std::size_t count = 1;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    count *= static_cast<std::size_t>(modulus);
    if (count > 4096) fail(ErrorKind::BudgetExceeded, "unitriangular group too large");
  }
  using Mat = std::vector<std::vector<int>>;
  auto decode = [&](std::size_t idx) {
    Mat m(size, std::vector<int>(size, 0));
    for (int i = 0; i < size; ++i) m[i][i] = 1;
    for (auto [r, c] : pos) {
      m[r][c] = static_cast<int>(idx % modulus);
      idx /= modulus;
    }
    return m;
  };
  auto encode = [&](const Mat& m) {
    std::size_t idx = 0, mult = 1;
    for (auto [r, c] : pos) {
      idx += mult * static_cast<std::size_t>(m[r][c]);
      mult *= modulus;
    }
    return static_cast<GroupElem>(idx);
  };
  std::vector<Mat> mats(count);
  for (std::size_t i = 0; i < count; ++i) mats[i] = decode(i);
  std::vector<std::vector<GroupElem>> table(count, std::vector<GroupElem>(count));
  for (std::size_t a = 0; a < count; ++a)
    for (std::size_t b = 0; b < count; ++b) {
      Mat p(size, std::vector<int>(size, 0));
      for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j) {
          long s = 0;
          for (int t = 0; t < size; ++t) s += long(mats[a][i][t]) * mats[b][t][j];
          p[i][j] = static_cast<int>(s % modulus);
        }
      table[a][b] = encode(p);
    }
  std::vector<std::vector<GroupElem>> layers;
  for (int i = 1; i < size; ++i) {
    std::vector<GroupElem> L;
    for (std::size_t a = 0; a < count; ++a) {
      bool ok = true;
      for (auto [r, c] : pos)
        if (c - r < i && mats[a][r][c] != 0) ok = false;
      if (ok) L.push_back(static_cast<GroupElem>(a));
    }
    layers.push_back(L);
  }
  std::vector<std::string> labels;
  for (std::size_t a = 0; a < count; ++a) {
    std::string s = "(";
    for (std::size_t t = 0; t < pos.size(); ++t) {
      if (t) s += ",";
      s += std::to_string(mats[a][pos[t].first][pos[t].second]);
    }
    labels.push_back(s + ")");
  }
  return FilteredGroup(std::move(table), std::move(layers), std::move(labels), false);
}

FilteredGroup FilteredGroup::abelian_cyclic(int modulus, int degree) {
  if (modulus < 1 || degree < 1) fail(ErrorKind::Invalid, "bad cyclic group parameters");
  std::vector<std::vector<GroupElem>> table(modulus, std::vector<GroupElem>(modulus));
  for (int a = 0; a < modulus; ++a)
    for (int b = 0; b < modulus; ++b) table[a][b] = static_cast<GroupElem>((a + b) % modulus);
  std::vector<GroupElem> all;
  for (int a = 0; a < modulus; ++a) all.push_back(static_cast<GroupElem>(a));
  std::vector<std::vector<GroupElem>> layers(degree, all);
  return FilteredGroup(std::move(table), std::move(layers));
}

bool hk_cube_membership(const FilteredGroup& g, const CubeMap<GroupElem>& q) {
  if (q.values.size() != (std::size_t(1) << q.n)) fail(ErrorKind::DimensionMismatch, "cube size");
  for (auto x : q.values)
    if (x >= g.order()) fail(ErrorKind::Invalid, "cube value is not a group element");
  return !hk_first_failure(g, q.values, q.n).has_value();
}

void for_each_hk_cube(const FilteredGroup& g, int n,
                      const std::function<bool(const std::vector<GroupElem>&)>& visit) {
  std::size_t len = std::size_t(1) << n;
  std::vector<Vertex> order(len);
  for (Vertex v = 0; v < len; ++v) order[v] = v;
  std::stable_sort(order.begin(), order.end(), [](Vertex a, Vertex b) { return height(a) < height(b); });
  // q = g_{last}^{F} ... g_0^{F_0}; build left to right starting from the last vertex.
  std::vector<std::vector<GroupElem>> stack(len + 1, std::vector<GroupElem>(len, g.identity()));
  bool stop = false;
  std::function<void(std::size_t)> rec = [&](std::size_t depth) {
    if (stop) return;
    if (depth == len) {
      if (!visit(stack[depth])) stop = true;
      return;
    }
    Vertex v = order[len - 1 - depth];
    for (auto x : g.layer(height(v))) {
      auto& next = stack[depth + 1];
      next = stack[depth];
      for (Vertex w = 0; w < len; ++w)
        if ((w & v) == v) next[w] = g.mul(next[w], x);
      rec(depth + 1);
      if (stop) return;
    }
  };
  rec(0);
}

std::uint64_t hk_cube_count(const FilteredGroup& g, int n) {
  std::uint64_t c = 1;
  for (Vertex v = 0; v < (Vertex(1) << n); ++v) c *= g.layer(height(v)).size();
  return c;
}

}  // namespace nilspace
