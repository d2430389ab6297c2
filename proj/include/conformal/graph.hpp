#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "conformal/error.hpp"
#include "conformal/matrix.hpp"
#include "conformal/rational.hpp"

namespace conformal {

struct Edge {
  int u = 0;
  int v = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline bool is_connected(int n, const std::vector<Edge>& edges) {
  if (n <= 0) return false;
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (const auto& e : edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
  }
  return count == n;
}

/// Simple connected undirected graph on 0..n-1 with a sorted edge list (u < v).
class Graph {
 public:
  Graph() = default;

  int n() const { return n_; }
  std::size_t m() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int v) const { return adj_[v]; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }
  int max_degree() const {
    int d = 0;
    for (int v = 0; v < n_; ++v) d = std::max(d, degree(v));
    return d;
  }
  bool has_edge(int u, int v) const { return adjm_[static_cast<std::size_t>(u) * n_ + v] != 0; }

  std::optional<std::size_t> edge_index(int u, int v) const {
    if (u > v) std::swap(u, v);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), Edge{u, v});
    if (it == edges_.end() || *it != Edge{u, v}) return std::nullopt;
    return static_cast<std::size_t>(it - edges_.begin());
  }

  std::optional<int> regular_degree() const {
    for (int v = 1; v < n_; ++v)
      if (degree(v) != degree(0)) return std::nullopt;
    return degree(0);
  }

  friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

  friend Graph build_graph(int n, std::vector<Edge> edges);

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
  std::vector<char> adjm_;
};

/// Validates and normalizes (u < v, sorted) an edge list.
inline Graph build_graph(int n, std::vector<Edge> edges) {
  if (n <= 0) throw Error(ErrorCode::kOutOfRange, "vertex count must be positive");
  for (auto& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
      throw Error(ErrorCode::kOutOfRange,
                  "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") outside 0.." + std::to_string(n - 1));
    if (e.u == e.v) throw Error(ErrorCode::kLoopEdge, "loop at vertex " + std::to_string(e.u));
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (edges[i] == edges[i - 1])
      throw Error(ErrorCode::kDuplicateEdge,
                  "edge (" + std::to_string(edges[i].u) + "," + std::to_string(edges[i].v) + ") repeated");
  if (edges.empty()) throw Error(ErrorCode::kDisconnected, "graph has no edges");
  if (!is_connected(n, edges)) throw Error(ErrorCode::kDisconnected, "graph is not connected");

  Graph g;
  g.n_ = n;
  g.edges_ = std::move(edges);
  g.adj_.assign(static_cast<std::size_t>(n), {});
  g.adjm_.assign(static_cast<std::size_t>(n) * n, 0);
  for (const auto& e : g.edges_) {
    g.adj_[e.u].push_back(e.v);
    g.adj_[e.v].push_back(e.u);
    g.adjm_[static_cast<std::size_t>(e.u) * n + e.v] = 1;
    g.adjm_[static_cast<std::size_t>(e.v) * n + e.u] = 1;
  }
  for (auto& nb : g.adj_) std::sort(nb.begin(), nb.end());
  return g;
}

/// Circulant C_n(S): edges {v, v+s mod n}. Steps are taken modulo n and folded to
/// min(s, n-s), so {10,11} on 21 vertices is the same as {10}.
inline Graph circulant(int n, const std::vector<int>& steps) {
  if (n < 2) throw Error(ErrorCode::kOutOfRange, "circulant needs n >= 2");
  std::set<int> folded;
  for (int s : steps) {
    if (s < 1 || s >= n) throw Error(ErrorCode::kOutOfRange, "step " + std::to_string(s) + " outside 1..n-1");
    folded.insert(std::min(s, n - s));
  }
  int g = n;
  for (int s : folded) g = std::gcd(g, s);
  if (g != 1) throw Error(ErrorCode::kDisconnectedCirculant, "gcd of steps and n is " + std::to_string(g));
  std::set<Edge> edges;
  for (int v = 0; v < n; ++v)
    for (int s : folded) {
      int w = (v + s) % n;
      edges.insert(Edge{std::min(v, w), std::max(v, w)});
    }
  return build_graph(n, {edges.begin(), edges.end()});
}

/// Finite group given by its multiplication table (table[g][h] = g∘h) with a
/// symmetric generating set.
struct CayleyPresentation {
  int order = 0;
  std::vector<std::vector<int>> table;
  std::vector<int> gens;

  static CayleyPresentation cyclic(int n, const std::vector<int>& gens) {
    CayleyPresentation p;
    p.order = n;
    p.table.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) p.table[a][b] = (a + b) % n;
    std::set<int> s;
    for (int g : gens) {
      int r = ((g % n) + n) % n;
      s.insert(r);
      s.insert((n - r) % n);
    }
    p.gens.assign(s.begin(), s.end());
    return p;
  }

  int identity() const {
    for (int e = 0; e < order; ++e) {
      bool ok = true;
      for (int g = 0; g < order && ok; ++g) ok = table[e][g] == g && table[g][e] == g;
      if (ok) return e;
    }
    throw Error(ErrorCode::kInvalidPresentation, "no identity element");
  }

  int inverse(int g) const {
    int e = identity();
    for (int h = 0; h < order; ++h)
      if (table[g][h] == e) return h;
    throw Error(ErrorCode::kInvalidPresentation, "element without inverse");
  }

  void validate() const {
    if (order <= 0 || table.size() != static_cast<std::size_t>(order))
      throw Error(ErrorCode::kInvalidPresentation, "table size does not match order");
    for (const auto& row : table) {
      if (row.size() != static_cast<std::size_t>(order))
        throw Error(ErrorCode::kInvalidPresentation, "ragged table");
      std::vector<char> seen(static_cast<std::size_t>(order), 0);
      for (int x : row) {
        if (x < 0 || x >= order || seen[x]) throw Error(ErrorCode::kInvalidPresentation, "table is not a Latin square");
        seen[x] = 1;
      }
    }
    for (int h = 0; h < order; ++h) {
      std::vector<char> seen(static_cast<std::size_t>(order), 0);
      for (int g = 0; g < order; ++g) {
        int x = table[g][h];
        if (seen[x]) throw Error(ErrorCode::kInvalidPresentation, "table is not a Latin square");
        seen[x] = 1;
      }
    }
    const int e = identity();
    std::set<int> s(gens.begin(), gens.end());
    for (int g : gens) {
      if (g < 0 || g >= order) throw Error(ErrorCode::kOutOfRange, "generator outside group");
      if (g == e) throw Error(ErrorCode::kLoopEdge, "identity in generating set");
      if (!s.count(inverse(g)))
        throw Error(ErrorCode::kNotSymmetricGeneratingSet,
                    "inverse of generator " + std::to_string(g) + " missing");
    }
  }
};

/// Γ(G,S): vertex g adjacent to s∘g.
inline Graph cayley_graph(const CayleyPresentation& p) {
  p.validate();
  std::set<Edge> edges;
  for (int g = 0; g < p.order; ++g)
    for (int s : p.gens) {
      int h = p.table[s][g];
      edges.insert(Edge{std::min(g, h), std::max(g, h)});
    }
  return build_graph(p.order, {edges.begin(), edges.end()});
}

inline Graph complement(const Graph& g) {
  std::vector<Edge> edges;
  for (int u = 0; u < g.n(); ++u)
    for (int v = u + 1; v < g.n(); ++v)
      if (!g.has_edge(u, v)) edges.push_back({u, v});
  if (edges.empty() || !is_connected(g.n(), edges))
    throw Error(ErrorCode::kDisconnected, "complement is not connected");
  return build_graph(g.n(), std::move(edges));
}

/// Nonnegative edge weights aligned with Graph::edges().
struct WeightVector {
  std::vector<double> values;
  bool normalized = false;

  static WeightVector ones(std::size_t m) { return {std::vector<double>(m, 1.0), true}; }
  double sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }
  std::size_t size() const { return values.size(); }
  friend bool operator==(const WeightVector&, const WeightVector&) = default;
};

inline void check_weights(const Graph& g, const WeightVector& w) {
  if (w.size() != g.m())
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(w.size()) + " weights for " + std::to_string(g.m()) + " edges");
  for (double x : w.values)
    if (!(x >= 0)) throw Error(ErrorCode::kNegativeWeight, "weight " + std::to_string(x));
}

inline Matrix laplacian(const Graph& g, const WeightVector& w) {
  check_weights(g, w);
  Matrix L = Matrix::Zero(g.n(), g.n());
  for (std::size_t k = 0; k < g.m(); ++k) {
    const auto [u, v] = g.edges()[k];
    const double x = w.values[k];
    L(u, v) -= x;
    L(v, u) -= x;
    L(u, u) += x;
    L(v, v) += x;
  }
  return L;
}

inline Matrix laplacian(const Graph& g) { return laplacian(g, WeightVector::ones(g.m())); }

inline RationalMatrix rational_laplacian(const Graph& g) {
  RationalMatrix L(static_cast<std::size_t>(g.n()), static_cast<std::size_t>(g.n()));
  for (const auto& [u, v] : g.edges()) {
    L(u, v) -= 1;
    L(v, u) -= 1;
    L(u, u) += 1;
    L(v, v) += 1;
  }
  return L;
}

/// Scales w so that its entries sum to m.
inline WeightVector normalize_weights(WeightVector w, std::size_t m) {
  for (double x : w.values)
    if (!(x >= 0)) throw Error(ErrorCode::kNegativeWeight, "weight " + std::to_string(x));
  const double s = w.sum();
  if (!(s > 0)) throw Error(ErrorCode::kAllZeroWeights, "cannot normalize a zero weighting");
  for (double& x : w.values) x *= static_cast<double>(m) / s;
  w.normalized = true;
  return w;
}

}  // namespace conformal
