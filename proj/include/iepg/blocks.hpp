#pragma once

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <vector>

#include "iepg/graph.hpp"

namespace iepg {

/// Blocks (maximal 2-connected subgraphs; bridges give K_2 blocks, isolated
/// vertices give singletons) and cut vertices of a graph. Blocks are listed
/// as sorted vertex sets, ordered lexicographically.
struct BlockDecomposition {
  std::vector<std::vector<int>> blocks;
  std::vector<int> cut_vertices;

  bool is_cut(int v) const {
    return std::binary_search(cut_vertices.begin(), cut_vertices.end(), v);
  }
};

inline bool is_connected(const Graph& g) {
  if (g.order() == 0) return true;
  std::vector<char> seen(g.order(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int w : g.neighbors(u))
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
  }
  return count == g.order();
}

/// Hopcroft-Tarjan DFS over an optional vertex subset (alive mask; empty mask
/// means all vertices).
inline BlockDecomposition block_decomposition(const Graph& g, const std::vector<char>& alive = {}) {
  const int n = g.order();
  const auto live = [&](int v) { return alive.empty() || alive[v]; };

  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<std::pair<int, int>> edge_stack;
  std::vector<std::vector<int>> blocks;
  std::vector<char> cut(n, 0);
  int timer = 0;

  std::function<void(int, int)> dfs = [&](int u, int parent) {
    disc[u] = low[u] = timer++;
    int children = 0;
    for (int w : g.neighbors(u)) {
      if (!live(w) || w == parent) continue;
      if (disc[w] == -1) {
        ++children;
        edge_stack.emplace_back(u, w);
        dfs(w, u);
        low[u] = std::min(low[u], low[w]);
        if (low[w] >= disc[u]) {
          if (parent != -1 || children > 1) cut[u] = 1;
          std::vector<int> verts;
          while (true) {
            auto [a, b] = edge_stack.back();
            edge_stack.pop_back();
            verts.push_back(a);
            verts.push_back(b);
            if (a == u && b == w) break;
          }
          std::sort(verts.begin(), verts.end());
          verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
          blocks.push_back(std::move(verts));
        }
      } else if (disc[w] < disc[u]) {
        edge_stack.emplace_back(u, w);
        low[u] = std::min(low[u], disc[w]);
      }
    }
  };

  for (int v = 0; v < n; ++v) {
    if (!live(v) || disc[v] != -1) continue;
    dfs(v, -1);
    if (g.degree(v) == 0 || std::none_of(g.neighbors(v).begin(), g.neighbors(v).end(), live))
      blocks.push_back({v});  // isolated within the subset
  }

  std::sort(blocks.begin(), blocks.end());
  BlockDecomposition out;
  out.blocks = std::move(blocks);
  for (int v = 0; v < n; ++v)
    if (cut[v]) out.cut_vertices.push_back(v);
  return out;
}

/// True when every block induces a clique.
inline bool is_block_graph(const Graph& g) {
  const auto dec = block_decomposition(g);
  for (const auto& blk : dec.blocks)
    for (std::size_t i = 0; i < blk.size(); ++i)
      for (std::size_t j = i + 1; j < blk.size(); ++j)
        if (!g.adjacent(blk[i], blk[j])) return false;
  return true;
}

/// Collapses, in every block, all non-cut vertices onto the lowest-labeled
/// one. The result is the unique minimal block graph G0 (every block keeps at
/// most one non-cut vertex) together with the blowup data reproducing G:
/// spec.base is G0 on compressed labels, spec.vertex_map sends each original
/// vertex of G to its image in G0.
inline BlowupSpec minimal_block_graph(const Graph& g) {
  if (g.order() < 1) throw std::invalid_argument("minimal_block_graph: empty graph");
  if (!is_connected(g)) throw std::invalid_argument("minimal_block_graph: graph not connected");
  if (!is_block_graph(g)) throw std::invalid_argument("minimal_block_graph: a block is not a clique");

  const auto dec = block_decomposition(g);
  const int n = g.order();
  std::vector<int> collapse(n);  // original vertex -> representative original vertex
  for (int v = 0; v < n; ++v) collapse[v] = v;
  for (const auto& blk : dec.blocks) {
    std::vector<int> non_cut;
    for (int v : blk)
      if (!dec.is_cut(v)) non_cut.push_back(v);
    for (std::size_t t = 1; t < non_cut.size(); ++t) collapse[non_cut[t]] = non_cut[0];
  }

  std::vector<int> kept;
  for (int v = 0; v < n; ++v)
    if (collapse[v] == v) kept.push_back(v);
  std::vector<int> base_label(n, -1);
  for (std::size_t i = 0; i < kept.size(); ++i) base_label[kept[i]] = static_cast<int>(i);

  std::vector<std::pair<int, int>> base_edges;
  for (const auto& [a, b] : g.edges()) {
    const int x = base_label[collapse[a]], y = base_label[collapse[b]];
    if (x != y) base_edges.emplace_back(std::min(x, y), std::max(x, y));
  }
  std::sort(base_edges.begin(), base_edges.end());
  base_edges.erase(std::unique(base_edges.begin(), base_edges.end()), base_edges.end());

  BlowupSpec spec;
  spec.base = Graph(static_cast<int>(kept.size()), std::move(base_edges));
  spec.multiplicities.assign(kept.size(), 0);
  spec.vertex_map.resize(n);
  for (int v = 0; v < n; ++v) {
    const int b = base_label[collapse[v]];
    spec.vertex_map[v] = b;
    ++spec.multiplicities[b];
  }
  return spec;
}

/// One star of a spanning star forest: the center plus >= 1 leaves.
struct Star {
  int center = -1;
  std::vector<int> leaves;

  int order() const { return 1 + static_cast<int>(leaves.size()); }

  std::vector<int> vertices() const {
    std::vector<int> v{center};
    v.insert(v.end(), leaves.begin(), leaves.end());
    std::sort(v.begin(), v.end());
    return v;
  }
};

namespace detail {

/// Cut vertices of the subgraph induced by the alive mask.
inline std::vector<char> cut_mask(const Graph& g, const std::vector<char>& alive) {
  std::vector<char> cut(g.order(), 0);
  const auto dec = block_decomposition(g, alive);
  for (int v : dec.cut_vertices) cut[v] = 1;
  return cut;
}

}  // namespace detail

/// Spanning forest of vertex-disjoint stars, each with >= 2 vertices,
/// covering all of G. Peels the smallest non-cut vertex until two vertices
/// remain, then reattaches in reverse: each returning vertex v joins the star
/// holding its smallest live neighbor w directly when that keeps a star, and
/// otherwise splits w off into a fresh edge {v, w}. Stars are returned in
/// order of their smallest vertex.
inline std::vector<Star> spanning_star_forest(const Graph& g) {
  if (g.order() < 2) throw std::invalid_argument("spanning_star_forest: need >= 2 vertices");
  if (!is_connected(g)) throw std::invalid_argument("spanning_star_forest: graph not connected");

  std::vector<char> alive(g.order(), 1);
  std::vector<int> removed;  // peel order
  int live_count = g.order();
  while (live_count > 2) {
    const auto cut = detail::cut_mask(g, alive);
    int v = -1;
    for (int u = 0; u < g.order() && v == -1; ++u)
      if (alive[u] && !cut[u]) v = u;
    alive[v] = 0;
    removed.push_back(v);
    --live_count;
  }

  std::vector<Star> stars;
  {
    std::vector<int> base;
    for (int u = 0; u < g.order(); ++u)
      if (alive[u]) base.push_back(u);
    stars.push_back(Star{base[0], {base[1]}});
  }

  std::vector<int> star_of(g.order(), -1);
  star_of[stars[0].center] = 0;
  star_of[stars[0].leaves[0]] = 0;

  for (auto it = removed.rbegin(); it != removed.rend(); ++it) {
    const int v = *it;
    alive[v] = 1;
    int w = -1;
    for (int u : g.neighbors(v))
      if (alive[u]) {
        w = u;
        break;
      }
    Star& s = stars[star_of[w]];
    if (s.order() == 2 || s.center == w) {
      if (s.center != w) {  // re-center a bare edge at the attachment point
        s.leaves[0] = s.center;
        s.center = w;
      }
      s.leaves.push_back(v);
      star_of[v] = star_of[w];
    } else {
      s.leaves.erase(std::find(s.leaves.begin(), s.leaves.end(), w));
      stars.push_back(Star{w, {v}});
      star_of[w] = star_of[v] = static_cast<int>(stars.size()) - 1;
    }
  }

  for (auto& s : stars) std::sort(s.leaves.begin(), s.leaves.end());
  std::sort(stars.begin(), stars.end(), [](const Star& a, const Star& b) {
    return a.vertices().front() < b.vertices().front();
  });
  return stars;
}

}  // namespace iepg
