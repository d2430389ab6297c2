#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "conformal/error.hpp"
#include "conformal/graph.hpp"

namespace conformal {

using Permutation = std::vector<int>;

inline bool is_automorphism(const Graph& g, const Permutation& p) {
  if (p.size() != static_cast<std::size_t>(g.n())) return false;
  std::vector<char> seen(p.size(), 0);
  for (int x : p) {
    if (x < 0 || x >= g.n() || seen[x]) return false;
    seen[x] = 1;
  }
  for (const auto& [u, v] : g.edges())
    if (!g.has_edge(p[u], p[v])) return false;
  return true;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

namespace detail {

// Color refinement to the coarsest equitable partition. Color ids are ranks of
// (old color, sorted neighbor colors), so they are invariant under relabelling.
inline void refine(const Graph& g, std::vector<int>& color) {
  const int n = g.n();
  std::size_t classes = std::set<int>(color.begin(), color.end()).size();
  std::vector<std::vector<int>> sig(static_cast<std::size_t>(n));
  while (true) {
    for (int v = 0; v < n; ++v) {
      auto& s = sig[v];
      s.clear();
      s.push_back(color[v]);
      for (int w : g.neighbors(v)) s.push_back(color[w]);
      std::sort(s.begin() + 1, s.end());
    }
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return sig[a] < sig[b]; });
    std::vector<int> fresh(static_cast<std::size_t>(n));
    int rank = 0;
    for (int i = 0; i < n; ++i) {
      if (i > 0 && sig[order[i]] != sig[order[i - 1]]) ++rank;
      fresh[order[i]] = rank;
    }
    color = std::move(fresh);
    if (static_cast<std::size_t>(rank + 1) == classes) return;
    classes = static_cast<std::size_t>(rank + 1);
  }
}

inline std::vector<int> cell_sizes(const std::vector<int>& color) {
  std::vector<int> sizes;
  for (int c : color) {
    if (c >= static_cast<int>(sizes.size())) sizes.resize(c + 1, 0);
    ++sizes[c];
  }
  return sizes;
}

inline std::vector<int> individualize(const Graph& g, const std::vector<int>& color, int v) {
  std::vector<int> c(color.size());
  for (std::size_t u = 0; u < color.size(); ++u) c[u] = 2 * color[u] + (static_cast<int>(u) == v ? 0 : 1);
  refine(g, c);
  return c;
}

// Target cell: smallest non-singleton cell, ties broken by smallest vertex. -1 if discrete.
inline int target_color(const std::vector<int>& color) {
  const auto sizes = cell_sizes(color);
  std::vector<int> first(sizes.size(), -1);
  for (std::size_t v = color.size(); v-- > 0;) first[color[v]] = static_cast<int>(v);
  int best = -1;
  for (int c = 0; c < static_cast<int>(sizes.size()); ++c) {
    if (sizes[c] < 2) continue;
    if (best < 0 || sizes[c] < sizes[best] || (sizes[c] == sizes[best] && first[c] < first[best])) best = c;
  }
  return best;
}

inline std::vector<int> cell_members(const std::vector<int>& color, int c) {
  std::vector<int> out;
  for (std::size_t v = 0; v < color.size(); ++v)
    if (color[v] == c) out.push_back(static_cast<int>(v));
  return out;
}

class AutomorphismSearch {
 public:
  explicit AutomorphismSearch(const Graph& g) : g_(g) {}

  std::vector<Permutation> run() {
    std::vector<int> color(static_cast<std::size_t>(g_.n()), 0);
    refine(g_, color);
    // First (leftmost) path.
    while (true) {
      path_.push_back(color);
      traces_.push_back(cell_sizes(color));
      int t = target_color(color);
      if (t < 0) break;
      targets_.push_back(t);
      int v = cell_members(color, t).front();
      chosen_.push_back(v);
      color = individualize(g_, color, v);
    }
    leaf0_ = inverse_leaf(path_.back());

    std::vector<Permutation> gens;
    for (int level = static_cast<int>(chosen_.size()) - 1; level >= 0; --level) {
      const auto cell = cell_members(path_[level], targets_[level]);
      const int v = chosen_[level];
      UnionFind uf(static_cast<std::size_t>(g_.n()));
      auto absorb = [&](const Permutation& p) {
        for (int x = 0; x < g_.n(); ++x) uf.unite(static_cast<std::size_t>(x), static_cast<std::size_t>(p[x]));
      };
      for (const auto& p : gens) absorb(p);
      std::set<std::size_t> failed;
      for (int w : cell) {
        if (w == v || uf.find(w) == uf.find(v) || failed.count(uf.find(w))) continue;
        auto child = individualize(g_, path_[level], w);
        std::optional<Permutation> found;
        if (cell_sizes(child) == traces_[level + 1]) found = descend(child, level + 1);
        if (found) {
          gens.push_back(*found);
          absorb(*found);
        } else {
          failed.insert(uf.find(w));
        }
      }
    }
    return gens;
  }

 private:
  std::vector<int> inverse_leaf(const std::vector<int>& color) const {
    std::vector<int> at(color.size());
    for (std::size_t v = 0; v < color.size(); ++v) at[color[v]] = static_cast<int>(v);
    return at;
  }

  std::optional<Permutation> descend(const std::vector<int>& color, std::size_t depth) {
    if (depth == targets_.size()) {
      const auto leaf = inverse_leaf(color);
      Permutation p(static_cast<std::size_t>(g_.n()));
      for (std::size_t c = 0; c < leaf.size(); ++c) p[leaf0_[c]] = leaf[c];
      if (is_automorphism(g_, p)) return p;
      return std::nullopt;
    }
    for (int u : cell_members(color, targets_[depth])) {
      auto child = individualize(g_, color, u);
      if (cell_sizes(child) != traces_[depth + 1]) continue;
      if (auto p = descend(child, depth + 1)) return p;
    }
    return std::nullopt;
  }

  const Graph& g_;
  std::vector<std::vector<int>> path_;
  std::vector<std::vector<int>> traces_;
  std::vector<int> targets_;
  std::vector<int> chosen_;
  std::vector<int> leaf0_;
};

}  // namespace detail

/// Generating set of Aut(G) by individualization-refinement; empty means trivial group.
inline std::vector<Permutation> automorphism_generators(const Graph& g, int size_cap = 256) {
  if (g.n() > size_cap)
    throw Error(ErrorCode::kSizeCapExceeded, std::to_string(g.n()) + " vertices exceeds cap " + std::to_string(size_cap));
  return detail::AutomorphismSearch(g).run();
}

/// All elements of the group generated by gens (identity included).
inline std::vector<Permutation> group_closure(const std::vector<Permutation>& gens, int n, std::size_t limit = 1000000) {
  Permutation id(static_cast<std::size_t>(n));
  std::iota(id.begin(), id.end(), 0);
  std::set<Permutation> seen{id};
  std::vector<Permutation> out{id};
  for (std::size_t i = 0; i < out.size(); ++i)
    for (const auto& s : gens) {
      Permutation q(static_cast<std::size_t>(n));
      for (int x = 0; x < n; ++x) q[x] = s[out[i][x]];
      if (seen.insert(q).second) {
        if (seen.size() > limit) throw Error(ErrorCode::kSizeCapExceeded, "group larger than closure limit");
        out.push_back(std::move(q));
      }
    }
  return out;
}

struct EdgeOrbitPartition {
  std::vector<std::vector<std::size_t>> orbits;  // edge indices, ascending; orbits ordered by first edge
  std::vector<Permutation> generators;
  std::vector<std::size_t> orbit_of;  // edge index -> orbit index

  std::size_t count() const { return orbits.size(); }
  std::vector<std::size_t> sizes() const {
    std::vector<std::size_t> s;
    for (const auto& o : orbits) s.push_back(o.size());
    return s;
  }
};

inline EdgeOrbitPartition edge_orbits(const Graph& g, const std::vector<Permutation>& gens) {
  UnionFind uf(g.m());
  for (const auto& p : gens)
    for (std::size_t k = 0; k < g.m(); ++k) {
      const auto [u, v] = g.edges()[k];
      auto image = g.edge_index(p[u], p[v]);
      if (!image) throw Error(ErrorCode::kDimensionMismatch, "generator is not an automorphism");
      uf.unite(k, *image);
    }
  EdgeOrbitPartition part;
  part.generators = gens;
  part.orbit_of.assign(g.m(), 0);
  std::map<std::size_t, std::size_t> index;
  for (std::size_t k = 0; k < g.m(); ++k) {
    auto root = uf.find(k);
    auto [it, fresh] = index.emplace(root, part.orbits.size());
    if (fresh) part.orbits.emplace_back();
    part.orbits[it->second].push_back(k);
    part.orbit_of[k] = it->second;
  }
  return part;
}

inline EdgeOrbitPartition edge_orbits(const Graph& g) { return edge_orbits(g, automorphism_generators(g)); }

inline bool is_edge_transitive(const Graph& g) { return edge_orbits(g).count() == 1; }

/// Replaces each weight by its orbit mean; the total is preserved.
inline WeightVector orbit_average(const EdgeOrbitPartition& orbits, const WeightVector& w) {
  WeightVector out = w;
  for (const auto& orbit : orbits.orbits) {
    double s = 0;
    for (auto k : orbit) s += w.values[k];
    for (auto k : orbit) out.values[k] = s / static_cast<double>(orbit.size());
  }
  return out;
}

inline WeightVector orbit_average(const Graph& g, const WeightVector& w) {
  check_weights(g, w);
  return orbit_average(edge_orbits(g), w);
}

inline std::vector<std::vector<int>> distance_matrix(const Graph& g) {
  const int n = g.n();
  std::vector<std::vector<int>> d(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), -1));
  for (int s = 0; s < n; ++s) {
    std::queue<int> q;
    q.push(s);
    d[s][s] = 0;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int w : g.neighbors(v))
        if (d[s][w] < 0) {
          d[s][w] = d[s][v] + 1;
          q.push(w);
        }
    }
  }
  return d;
}

struct IntersectionArray {
  std::vector<int> b;  // b_0 .. b_{d-1}
  std::vector<int> c;  // c_1 .. c_d
  int diameter = 0;
  friend bool operator==(const IntersectionArray&, const IntersectionArray&) = default;
};

struct DrgCheck {
  std::optional<IntersectionArray> array;
  int violating_i = -1, violating_j = -1;  // pair whose counts differ from the first pair at that distance
  bool is_drg() const { return array.has_value(); }
};

inline DrgCheck distance_regular_check(const Graph& g) {
  const auto d = distance_matrix(g);
  int diameter = 0;
  for (const auto& row : d)
    for (int x : row) diameter = std::max(diameter, x);
  struct Counts { int c = -1, a = -1, b = -1; };
  std::vector<Counts> at(static_cast<std::size_t>(diameter) + 1);
  DrgCheck out;
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) {
      const int h = d[i][j];
      Counts k{0, 0, 0};
      for (int w : g.neighbors(j)) {
        if (d[i][w] == h - 1) ++k.c;
        else if (d[i][w] == h) ++k.a;
        else ++k.b;
      }
      if (at[h].c < 0) {
        at[h] = k;
      } else if (at[h].c != k.c || at[h].a != k.a || at[h].b != k.b) {
        out.violating_i = i;
        out.violating_j = j;
        return out;
      }
    }
  IntersectionArray arr;
  arr.diameter = diameter;
  for (int h = 0; h < diameter; ++h) arr.b.push_back(at[h].b);
  for (int h = 1; h <= diameter; ++h) arr.c.push_back(at[h].c);
  out.array = arr;
  return out;
}

inline bool is_strongly_regular(const Graph& g) {
  auto r = distance_regular_check(g);
  return r.is_drg() && r.array->diameter == 2;
}

}  // namespace conformal
