#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace iepg {

/// Labeled simple graph on vertices 0..n-1. Edges are stored normalized
/// (i < j) and sorted lexicographically; construction rejects self-loops,
/// out-of-range endpoints and duplicates. Instances are immutable.
class Graph {
 public:
  Graph() = default;

  Graph(int n, std::vector<std::pair<int, int>> edges) : n_(n) {
    if (n < 0) throw std::invalid_argument("Graph: negative order");
    for (auto& e : edges) {
      if (e.first == e.second) throw std::invalid_argument("Graph: self-loop");
      if (e.first > e.second) std::swap(e.first, e.second);
      if (e.first < 0 || e.second >= n) throw std::invalid_argument("Graph: endpoint out of range");
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
      throw std::invalid_argument("Graph: duplicate edge");
    edges_ = std::move(edges);
    adj_.assign(n_, {});
    for (const auto& [i, j] : edges_) {
      adj_[i].push_back(j);
      adj_[j].push_back(i);
    }
    for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
  }

  int order() const { return n_; }
  int size() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int v) const { return adj_.at(v); }
  int degree(int v) const { return static_cast<int>(adj_.at(v).size()); }

  bool adjacent(int i, int j) const {
    if (i == j) return false;
    const auto& nb = adj_.at(i);
    return std::binary_search(nb.begin(), nb.end(), j);
  }

  bool operator==(const Graph& o) const { return n_ == o.n_ && edges_ == o.edges_; }
  bool operator!=(const Graph& o) const { return !(*this == o); }

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_;
};

/// Complete graph K_n.
inline Graph complete(int n) {
  if (n < 1) throw std::invalid_argument("complete: order must be >= 1");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph(n, std::move(e));
}

/// Path 0-1-...-(n-1).
inline Graph path(int n) {
  if (n < 1) throw std::invalid_argument("path: order must be >= 1");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph(n, std::move(e));
}

/// Star K_{1,n-1}: center 0, leaves 1..n-1.
inline Graph star(int n) {
  if (n < 1) throw std::invalid_argument("star: order must be >= 1");
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i < n; ++i) e.emplace_back(0, i);
  return Graph(n, std::move(e));
}

/// Lollipop: K_k on 0..k-1 with the path k..k+p-1 hung off clique vertex k-1.
/// p = 0 is the bare clique.
inline Graph lollipop(int k, int p) {
  if (k < 2) throw std::invalid_argument("lollipop: clique order must be >= 2");
  if (p < 0) throw std::invalid_argument("lollipop: negative path length");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) e.emplace_back(i, j);
  for (int i = 0; i < p; ++i) e.emplace_back(k - 1 + i, k + i);
  return Graph(k + p, std::move(e));
}

/// Barbell: K_{k1} on 0..k1-1 and K_{k2} on k1+p..k1+p+k2-1 joined by a path
/// through p interior vertices (p = 0 joins the cliques by a single edge).
inline Graph barbell(int k1, int p, int k2) {
  if (k1 < 2 || k2 < 2) throw std::invalid_argument("barbell: clique orders must be >= 2");
  if (p < 0) throw std::invalid_argument("barbell: negative path length");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < k1; ++i)
    for (int j = i + 1; j < k1; ++j) e.emplace_back(i, j);
  const int c2 = k1 + p;  // first vertex of the second clique
  for (int i = 0; i < k2; ++i)
    for (int j = i + 1; j < k2; ++j) e.emplace_back(c2 + i, c2 + j);
  for (int i = 0; i <= p; ++i) e.emplace_back(k1 - 1 + i, k1 + i);
  return Graph(k1 + p + k2, std::move(e));
}

/// Chain of cliques K_{b1},...,K_{bh} where consecutive cliques share one cut
/// vertex: block i occupies the labels starting at the previous block's last
/// vertex. Order 1 + sum(b_i - 1).
inline Graph clique_path(const std::vector<int>& sizes) {
  if (sizes.empty()) throw std::invalid_argument("clique_path: no blocks");
  for (int b : sizes)
    if (b < 2) throw std::invalid_argument("clique_path: block size must be >= 2");
  std::vector<std::pair<int, int>> e;
  int start = 0;
  for (int b : sizes) {
    for (int i = 0; i < b; ++i)
      for (int j = i + 1; j < b; ++j) e.emplace_back(start + i, start + j);
    start += b - 1;
  }
  return Graph(start + 1, std::move(e));
}

/// Cliques K_{m1},...,K_{mh} all sharing the single center vertex 0.
inline Graph clique_star(const std::vector<int>& sizes) {
  if (sizes.empty()) throw std::invalid_argument("clique_star: no blocks");
  for (int b : sizes)
    if (b < 2) throw std::invalid_argument("clique_star: block size must be >= 2");
  std::vector<std::pair<int, int>> e;
  int next = 1;
  for (int b : sizes) {
    std::vector<int> blk{0};
    for (int t = 0; t < b - 1; ++t) blk.push_back(next++);
    for (std::size_t i = 0; i < blk.size(); ++i)
      for (std::size_t j = i + 1; j < blk.size(); ++j) e.emplace_back(blk[i], blk[j]);
  }
  return Graph(next, std::move(e));
}

/// Corona of K_n with K_1: clique 0..n-1 plus one pendant vertex n+i per
/// clique vertex i.
inline Graph corona_complete(int n) {
  if (n < 1) throw std::invalid_argument("corona_complete: order must be >= 1");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  for (int i = 0; i < n; ++i) e.emplace_back(i, n + i);
  return Graph(2 * n, std::move(e));
}

/// Vertex-sum of G and H identifying H's vertex w with G's vertex v. G keeps
/// its labels; the remaining vertices of H follow in ascending order starting
/// at |G|.
inline Graph vertex_sum(const Graph& g, int v, const Graph& h, int w) {
  if (v < 0 || v >= g.order()) throw std::invalid_argument("vertex_sum: v out of range");
  if (w < 0 || w >= h.order()) throw std::invalid_argument("vertex_sum: w out of range");
  std::vector<int> map(h.order());
  int next = g.order();
  for (int u = 0; u < h.order(); ++u) map[u] = (u == w) ? v : next++;
  std::vector<std::pair<int, int>> e = g.edges();
  for (const auto& [a, b] : h.edges()) e.emplace_back(map[a], map[b]);
  return Graph(g.order() + h.order() - 1, std::move(e));
}

inline Graph complement(const Graph& g) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < g.order(); ++i)
    for (int j = i + 1; j < g.order(); ++j)
      if (!g.adjacent(i, j)) e.emplace_back(i, j);
  return Graph(g.order(), std::move(e));
}

inline Graph disjoint_union(const Graph& g, const Graph& h) {
  std::vector<std::pair<int, int>> e = g.edges();
  for (const auto& [a, b] : h.edges()) e.emplace_back(g.order() + a, g.order() + b);
  return Graph(g.order() + h.order(), std::move(e));
}

/// True when G's vertex range fits inside H's and every edge of G is an edge
/// of H (subgraph on the shared labeling).
inline bool is_subgraph(const Graph& g, const Graph& h) {
  if (g.order() > h.order()) return false;
  for (const auto& [i, j] : g.edges())
    if (!h.adjacent(i, j)) return false;
  return true;
}

/// Result of expanding base vertex i into a clique of multiplicities[i]
/// mutually adjacent copies. vertex_map sends each blown-up label to the base
/// vertex it copies; for the canonical labeling produced by blowup() the
/// copies of base vertex i are consecutive.
struct BlowupSpec {
  Graph base;
  std::vector<int> multiplicities;
  std::vector<int> vertex_map;

  int blown_order() const { return static_cast<int>(vertex_map.size()); }

  /// Blown-up labels copying base vertex i, ascending.
  std::vector<int> group(int i) const {
    std::vector<int> out;
    for (int u = 0; u < blown_order(); ++u)
      if (vertex_map[u] == i) out.push_back(u);
    return out;
  }
};

/// Canonical blowup labeling: copies of base vertex i occupy the consecutive
/// labels [sum m_j for j < i, ... + m_i).
inline BlowupSpec blowup(const Graph& base, const std::vector<int>& multiplicities) {
  if (static_cast<int>(multiplicities.size()) != base.order())
    throw std::invalid_argument("blowup: multiplicity count != base order");
  for (int m : multiplicities)
    if (m < 1) throw std::invalid_argument("blowup: multiplicities must be >= 1");
  BlowupSpec spec;
  spec.base = base;
  spec.multiplicities = multiplicities;
  for (int i = 0; i < base.order(); ++i)
    for (int t = 0; t < multiplicities[i]; ++t) spec.vertex_map.push_back(i);
  return spec;
}

/// Quotient of G by closed twins: vertices with identical closed
/// neighborhoods are merged into one base vertex (a closed twin class is
/// always a clique, so the quotient blows back up to exactly G). Base
/// vertices are the classes ordered by their smallest member. When G has no
/// closed twins the spec is the identity blowup of G itself.
inline BlowupSpec twin_reduction(const Graph& g) {
  const int n = g.order();
  std::vector<std::vector<int>> closed(n);
  for (int v = 0; v < n; ++v) {
    closed[v] = g.neighbors(v);
    closed[v].push_back(v);
    std::sort(closed[v].begin(), closed[v].end());
  }
  std::vector<int> cls(n, -1);
  std::vector<int> reps;
  for (int v = 0; v < n; ++v) {
    for (std::size_t c = 0; c < reps.size(); ++c)
      if (closed[v] == closed[reps[c]]) {
        cls[v] = static_cast<int>(c);
        break;
      }
    if (cls[v] < 0) {
      cls[v] = static_cast<int>(reps.size());
      reps.push_back(v);
    }
  }
  std::vector<std::pair<int, int>> e;
  for (std::size_t a = 0; a < reps.size(); ++a)
    for (std::size_t b = a + 1; b < reps.size(); ++b)
      if (g.adjacent(reps[a], reps[b]))
        e.emplace_back(static_cast<int>(a), static_cast<int>(b));
  BlowupSpec spec;
  spec.base = Graph(static_cast<int>(reps.size()), std::move(e));
  spec.multiplicities.assign(reps.size(), 0);
  for (int v = 0; v < n; ++v) ++spec.multiplicities[cls[v]];
  spec.vertex_map = cls;
  return spec;
}

/// The blown-up graph of a spec, on the spec's own labels: copies of one base
/// vertex are mutually adjacent, copies of adjacent base vertices are joined
/// completely.
inline Graph blowup_graph(const BlowupSpec& spec) {
  const int n = spec.blown_order();
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      const int bu = spec.vertex_map[u], bv = spec.vertex_map[v];
      if (bu == bv || spec.base.adjacent(bu, bv)) e.emplace_back(u, v);
    }
  return Graph(n, std::move(e));
}

}  // namespace iepg
