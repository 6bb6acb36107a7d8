#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "iepg/blocks.hpp"
#include "iepg/constructors.hpp"
#include "iepg/continuation.hpp"
#include "iepg/errors.hpp"
#include "iepg/multiplicity.hpp"
#include "iepg/spectrum.hpp"
#include "iepg/ssp.hpp"

namespace iepg {

/// A certified multiplicity assignment on the reduced base of a block graph:
/// the distinguished block hosts the eigenvalue of multiplicity k on a
/// sub-clique, and every block's remaining head count is split into the parts
/// of its partition. Flat part order is the k part first, then each block's
/// parts in block-list order; part_targets sends the flat part index to the
/// index of the target multiplicity it realizes.
struct FeasibilityWitness {
  int block = 0;
  int k = 1;
  Refinement refinement;  // one partition per block of the reduced base
  std::vector<int> part_targets;
};

struct FeasibilitySearch {
  std::optional<FeasibilityWitness> witness;
  bool budget_exhausted = false;
};

/// Base used by the solver: the minimal block graph of G, except that a
/// single-block G (a complete graph) stays its own base, since collapsing it
/// to one vertex would leave the multiplicity machinery nothing to work with.
inline BlowupSpec realization_base(const Graph& g) {
  const auto dec = block_decomposition(g);
  if (dec.blocks.size() <= 1) {
    BlowupSpec spec;
    spec.base = g;
    spec.multiplicities.assign(static_cast<std::size_t>(g.order()), 1);
    spec.vertex_map.resize(static_cast<std::size_t>(g.order()));
    std::iota(spec.vertex_map.begin(), spec.vertex_map.end(), 0);
    return spec;
  }
  return minimal_block_graph(g);
}

namespace detail {

/// Flat part sizes of a witness candidate: k first, then block-major parts.
inline MultiplicityList flat_parts(int k, const Refinement& refinement) {
  MultiplicityList flat{k};
  for (const MultiplicityList& parts : refinement)
    flat.insert(flat.end(), parts.begin(), parts.end());
  return flat;
}

/// Pair flat parts with target multiplicities rank by rank: parts sorted by
/// (size desc, flat index asc), targets by (multiplicity desc, index asc).
/// Valid whenever the target covers the flat list.
inline std::vector<int> assign_parts(const MultiplicityList& flat,
                                     const MultiplicityList& target) {
  std::vector<int> part_rank(flat.size());
  std::iota(part_rank.begin(), part_rank.end(), 0);
  std::stable_sort(part_rank.begin(), part_rank.end(),
                   [&](int a, int b) { return flat[a] > flat[b]; });
  std::vector<int> target_rank(target.size());
  std::iota(target_rank.begin(), target_rank.end(), 0);
  std::stable_sort(target_rank.begin(), target_rank.end(),
                   [&](int a, int b) { return target[a] > target[b]; });
  std::vector<int> out(flat.size(), -1);
  for (std::size_t r = 0; r < flat.size(); ++r) out[part_rank[r]] = target_rank[r];
  return out;
}

}  // namespace detail

/// Search for a multiplicity witness: a distinguished block, a multiplicity
/// k for its lead eigenvalue, and a partition refinement of the remaining
/// per-block head counts that the target list covers. Blocks are tried
/// largest first, k from its maximum down, refinements in enumeration order
/// with a per-(block, k) budget; the first hit wins. An empty result with
/// budget_exhausted set means the search was cut short, not that no witness
/// exists.
inline FeasibilitySearch feasible_multiplicity(const Graph& g,
                                               const MultiplicityList& target,
                                               int budget = 10000) {
  if (target.empty()) throw std::invalid_argument("feasible_multiplicity: empty target");
  int total = 0;
  for (int m : target) {
    if (m < 1)
      throw std::invalid_argument("feasible_multiplicity: multiplicities must be >= 1");
    total += m;
  }
  if (total != g.order())
    throw std::invalid_argument(
        "feasible_multiplicity: multiplicities must sum to the graph order");
  if (!is_connected(g))
    throw std::invalid_argument("feasible_multiplicity: graph not connected");
  if (!is_block_graph(g))
    throw std::invalid_argument("feasible_multiplicity: not a block graph");

  FeasibilitySearch out;
  if (g.order() == 1) {
    out.witness = FeasibilityWitness{0, 1, {{}}, {0}};
    return out;
  }

  const BlowupSpec base = realization_base(g);
  const auto dec = block_decomposition(base.base);
  const int h = static_cast<int>(dec.blocks.size());

  std::vector<int> order(static_cast<std::size_t>(h));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return dec.blocks[a].size() > dec.blocks[b].size();
  });

  for (int db : order) {
    const int m_db = static_cast<int>(dec.blocks[db].size()) - 1;
    for (int k = m_db; k >= 1; --k) {
      MultiplicityList heads;  // distinguished remainder first, others in index order
      heads.push_back(m_db + 1 - k);
      for (int i = 0; i < h; ++i)
        if (i != db) heads.push_back(static_cast<int>(dec.blocks[i].size()) - 1);
      const RefinementEnumeration en = enumerate_refinements(heads, budget);
      out.budget_exhausted = out.budget_exhausted || en.truncated;
      for (const Refinement& r : en.items) {
        const MultiplicityList flat = detail::flat_parts(k, r);
        if (!covers(target, flat)) continue;
        FeasibilityWitness w;
        w.block = db;
        w.k = k;
        w.refinement.resize(static_cast<std::size_t>(h));
        w.refinement[db] = r[0];
        for (int i = 0, t = 1; i < h; ++i)
          if (i != db) w.refinement[i] = r[t++];
        // re-flatten in block-list order so part_targets lines up with it
        const MultiplicityList flat_ordered = detail::flat_parts(k, w.refinement);
        w.part_targets = detail::assign_parts(flat_ordered, target);
        out.witness = std::move(w);
        return out;
      }
    }
  }
  return out;
}

/// Everything a realization run leaves behind for checking: the matrix, the
/// target it was asked for, the pattern and deviation checks, the SSP verdict
/// of the reduced-stage matrix (absent for routes that never form one), the
/// multiplicity witness when one was used, and a log of the stages run.
struct RealizationCertificate {
  Graph graph{0, {}};
  std::vector<double> target;
  SymMatrix matrix{0};
  double spectral_deviation = 0.0;
  bool pattern_ok = false;
  std::optional<SspVerdict> reduced_ssp;
  std::optional<FeasibilityWitness> witness;
  std::vector<std::string> stages;
};

/// Matrix and side products of a blowup-route realization.
struct BlowupRealization {
  SymMatrix matrix{0};
  SymMatrix base_matrix{0};
  SspVerdict base_ssp;
  std::vector<double> sigma_base;
  std::vector<double> sigma_rest;
};

/// Realize sigma on the blown-up graph of a spec: give the base one distinct
/// representative per eigenvalue group (groups with higher multiplicity get
/// priority when sigma has more groups than the base has vertices), then
/// absorb every remaining copy by expanding the base vertices. Needs at least
/// base-order many distinct values in sigma.
inline BlowupRealization realize_blowup_of(const BlowupSpec& spec,
                                           const std::vector<double>& sigma, Rng& rng,
                                           const Tolerances& tol = {}) {
  const int n0 = spec.base.order();
  const int n = spec.blown_order();
  if (static_cast<int>(sigma.size()) != n)
    throw std::invalid_argument("realize_blowup_of: spectrum size mismatch");
  const Spectrum sp = group_values(sigma, tol.group_tol);
  if (sp.groups() < n0)
    throw std::invalid_argument(
        "realize_blowup_of: needs at least as many distinct eigenvalues as the "
        "base has vertices");

  std::vector<int> pick(static_cast<std::size_t>(sp.groups()));
  std::iota(pick.begin(), pick.end(), 0);
  std::stable_sort(pick.begin(), pick.end(), [&](int a, int b) {
    return sp.multiplicities[a] > sp.multiplicities[b];
  });

  BlowupRealization out;
  std::vector<char> in_base(static_cast<std::size_t>(sp.groups()), 0);
  for (int t = 0; t < n0; ++t) in_base[pick[t]] = 1;
  for (int t = 0; t < sp.groups(); ++t) {
    const int rest = sp.multiplicities[t] - (in_base[t] ? 1 : 0);
    if (in_base[t]) out.sigma_base.push_back(sp.values[t]);
    out.sigma_rest.insert(out.sigma_rest.end(), static_cast<std::size_t>(rest),
                          sp.values[t]);
  }
  std::vector<double> forbid = out.sigma_rest;
  forbid.erase(std::unique(forbid.begin(), forbid.end()), forbid.end());

  std::string last_error;
  for (int attempt = 0; attempt < 3; ++attempt) {
    try {
      out.base_matrix = diag_avoiding_realize(spec.base, out.sigma_base, forbid, rng, tol);
      out.base_ssp = has_ssp(out.base_matrix, spec.base, tol);
      out.matrix = blowup_realize(out.base_matrix, out.sigma_rest, spec, rng, tol);
      return out;
    } catch (const ConstructionError& e) {
      last_error = e.what();
    }
  }
  throw ConstructionError("realize_blowup_of: all attempts failed; last: " + last_error);
}

namespace detail {

/// One attempt of the main pipeline on a block graph: seed the distinguished
/// block, grow the clique chain over the reduced base, restore the missing
/// block edges isospectrally, then expand back to G.
inline RealizationCertificate realize_block_graph_attempt(
    const Graph& g, const std::vector<double>& sigma_sorted, const Spectrum& sp,
    const BlowupSpec& base, const FeasibilityWitness& w, Rng& rng,
    const Tolerances& tol) {
  RealizationCertificate cert;
  cert.graph = g;
  cert.target = sigma_sorted;
  cert.witness = w;

  const Graph& g0 = base.base;
  const int n0 = g0.order();
  const auto dec = block_decomposition(g0);
  const int h = static_cast<int>(dec.blocks.size());
  {
    std::ostringstream s;
    s << "base: order " << n0 << ", " << h << " blocks";
    cert.stages.push_back(s.str());
  }

  // flat part index of (block i, part j), with the k part at index 0
  std::vector<int> first_flat(static_cast<std::size_t>(h));
  {
    int f = 1;
    for (int i = 0; i < h; ++i) {
      first_flat[i] = f;
      f += static_cast<int>(w.refinement[i].size());
    }
  }
  const auto value_of = [&](int flat) { return sp.values[w.part_targets[flat]]; };

  // leftover copies to absorb in the final expansion
  std::vector<int> assigned(static_cast<std::size_t>(sp.groups()), 0);
  assigned[w.part_targets[0]] += w.k;
  for (int i = 0; i < h; ++i)
    for (std::size_t j = 0; j < w.refinement[i].size(); ++j)
      assigned[w.part_targets[first_flat[i] + static_cast<int>(j)]] +=
          w.refinement[i][j];
  std::vector<double> sigma_rest;
  std::vector<double> rest_distinct;
  for (int t = 0; t < sp.groups(); ++t) {
    const int rest = sp.multiplicities[t] - assigned[t];
    if (rest > 0) rest_distinct.push_back(sp.values[t]);
    sigma_rest.insert(sigma_rest.end(), static_cast<std::size_t>(rest), sp.values[t]);
  }

  // breadth-first order over blocks from the distinguished one
  std::vector<std::vector<int>> blocks_of(static_cast<std::size_t>(n0));
  for (int i = 0; i < h; ++i)
    for (int v : dec.blocks[i]) blocks_of[v].push_back(i);
  std::vector<int> parent_attach(static_cast<std::size_t>(h), -1);
  std::vector<char> seen(static_cast<std::size_t>(h), 0);
  std::vector<int> bfs{w.block};
  seen[w.block] = 1;
  for (std::size_t head = 0; head < bfs.size(); ++head) {
    const int cb = bfs[head];
    for (int v : dec.blocks[cb])
      for (int nb : blocks_of[v])
        if (!seen[nb]) {
          seen[nb] = 1;
          parent_attach[nb] = v;
          bfs.push_back(nb);
        }
  }
  if (static_cast<int>(bfs.size()) != h)
    throw std::logic_error("realize_block_graph: block tree not connected");

  // chain plan on chain labels; hat_label maps chain label -> base vertex
  std::vector<int> hat_label;
  std::vector<int> hat_of(static_cast<std::size_t>(n0), -1);
  const auto place = [&](int v) {
    hat_of[v] = static_cast<int>(hat_label.size());
    hat_label.push_back(v);
  };
  const MultiplicityList& root_parts = w.refinement[w.block];
  const int seed_m = root_parts[0];
  const int seed_order = seed_m + w.k;
  for (int t = 0; t < seed_order; ++t) place(dec.blocks[w.block][t]);

  std::vector<CliqueAttachment> plan;
  const auto plan_runs = [&](int block, std::size_t from_part,
                             const std::vector<int>& fresh, int attach0) {
    std::size_t cursor = 0;
    int attach = attach0;
    for (std::size_t j = from_part; j < w.refinement[block].size(); ++j) {
      const int size = w.refinement[block][j];
      plan.push_back({attach, value_of(first_flat[block] + static_cast<int>(j)), size});
      for (int t = 0; t < size; ++t) place(fresh[cursor++]);
      attach = static_cast<int>(hat_label.size()) - 1;
    }
  };

  for (std::size_t pos = 0; pos < bfs.size(); ++pos) {
    const int b = bfs[pos];
    if (b == w.block) {
      std::vector<int> fresh(dec.blocks[b].begin() + seed_order, dec.blocks[b].end());
      plan_runs(b, 1, fresh, seed_order - 1);
    } else {
      std::vector<int> fresh;
      for (int v : dec.blocks[b])
        if (v != parent_attach[b]) fresh.push_back(v);
      plan_runs(b, 0, fresh, hat_of[parent_attach[b]]);
    }
  }
  if (static_cast<int>(hat_label.size()) != n0)
    throw std::logic_error("realize_block_graph: chain does not span the base");

  // the seed realizes the k part and the first part of the distinguished block
  std::vector<double> forbid_sub;
  for (const CliqueAttachment& att : plan) forbid_sub.push_back(att.value);
  const SymMatrix seed =
      two_eig_complete(value_of(0), w.k, value_of(first_flat[w.block]), seed_m,
                       forbid_sub, rest_distinct, rng, tol);
  {
    std::ostringstream s;
    s << "seed: clique of " << seed_order << " on block " << w.block << ", k=" << w.k;
    cert.stages.push_back(s.str());
  }

  const AppendChainResult chain =
      append_cliques_chain(seed, complete(seed_order), plan, tol);
  {
    std::ostringstream s;
    s << "chain: " << plan.size() << " clique appends";
    cert.stages.push_back(s.str());
  }

  // move from chain labels back to the base labels
  SymMatrix a_hat = permute(chain.matrix, hat_label);
  std::vector<std::pair<int, int>> hat_edges;
  for (const auto& [u, v] : chain.graph.edges()) {
    const int x = hat_label[u], y = hat_label[v];
    hat_edges.emplace_back(std::min(x, y), std::max(x, y));
  }
  const Graph g_hat(n0, std::move(hat_edges));
  if (!is_subgraph(g_hat, g0))
    throw std::logic_error("realize_block_graph: chain left the base graph");

  SymMatrix a0{0};
  if (static_cast<int>(g_hat.edges().size()) == static_cast<int>(g0.edges().size())) {
    a0 = a_hat;
    cert.stages.push_back("fill: chain already covers the base");
  } else {
    double diag_margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n0; ++i)
      diag_margin = std::min(diag_margin, distance_to_set(a_hat(i, i), rest_distinct));
    if (diag_margin <= tol.group_tol)
      throw ConstructionError(
          "realize_block_graph: chain diagonal landed on a leftover eigenvalue");
    const double eps =
        std::min(0.02 * (1.0 + a_hat.frobenius()), 0.4 * diag_margin);
    a0 = ssp_supergraph_perturb(a_hat, g_hat, g0, eps, tol);
    std::ostringstream s;
    s << "fill: " << g0.edges().size() - g_hat.edges().size() << " edges restored";
    cert.stages.push_back(s.str());
  }
  for (int i = 0; i < n0; ++i)
    if (distance_to_set(a0(i, i), rest_distinct) <= tol.group_tol)
      throw ConstructionError(
          "realize_block_graph: a diagonal entry drifted onto a leftover eigenvalue");
  cert.reduced_ssp = has_ssp(a0, g0, tol);

  cert.matrix = blowup_realize(a0, sigma_rest, base, rng, tol);
  {
    std::ostringstream s;
    s << "blowup: " << sigma_rest.size() << " extra eigenvalues absorbed";
    cert.stages.push_back(s.str());
  }

  double scale = 1.0;
  for (double v : sigma_sorted) scale = std::max(scale, 1.0 + std::abs(v));
  cert.spectral_deviation = multiset_distance(eigvals(cert.matrix), sigma_sorted);
  cert.pattern_ok = in_pattern_strict(cert.matrix, g, tol.zero_tol);
  if (cert.spectral_deviation > 1e-6 * scale)
    throw ConstructionError("realize_block_graph: spectrum missed the target");
  if (!cert.pattern_ok)
    throw ConstructionError("realize_block_graph: support does not match the graph");
  return cert;
}

/// Certificate fields shared by the blowup-route entry points.
inline RealizationCertificate blowup_certificate(const Graph& g,
                                                 const std::vector<double>& sigma_sorted,
                                                 const BlowupSpec& spec,
                                                 const BlowupRealization& r,
                                                 const Tolerances& tol) {
  RealizationCertificate cert;
  cert.graph = g;
  cert.target = sigma_sorted;
  cert.matrix = r.matrix;
  cert.reduced_ssp = r.base_ssp;
  {
    std::ostringstream s;
    s << "base: order " << spec.base.order() << " with " << r.sigma_base.size()
      << " distinct values";
    cert.stages.push_back(s.str());
  }
  {
    std::ostringstream s;
    s << "blowup: " << r.sigma_rest.size() << " extra eigenvalues absorbed";
    cert.stages.push_back(s.str());
  }
  double scale = 1.0;
  for (double v : sigma_sorted) scale = std::max(scale, 1.0 + std::abs(v));
  cert.spectral_deviation = multiset_distance(eigvals(cert.matrix), sigma_sorted);
  cert.pattern_ok = in_pattern_strict(cert.matrix, g, tol.zero_tol);
  if (cert.spectral_deviation > 1e-6 * scale)
    throw ConstructionError("blowup route: spectrum missed the target");
  if (!cert.pattern_ok)
    throw ConstructionError("blowup route: support does not match the graph");
  return cert;
}

inline RealizationCertificate trivial_certificate(const Graph& g, double value) {
  RealizationCertificate cert;
  cert.graph = g;
  cert.target = {value};
  cert.matrix = SymMatrix::scaled_identity(1, value);
  cert.spectral_deviation = 0.0;
  cert.pattern_ok = true;
  cert.reduced_ssp = has_ssp(cert.matrix, g);
  cert.stages.push_back("single vertex");
  return cert;
}

}  // namespace detail

/// Realize a spectrum on a connected block graph. Finds a multiplicity
/// witness on the reduced base and runs the seed / chain / fill / blowup
/// pipeline; when the witness search is cut short by its budget but the
/// spectrum has enough distinct values, falls back to the plain blowup route.
/// Throws NotCertifiedError when no route applies and ConstructionError when
/// every numerical attempt fails.
inline RealizationCertificate realize_block_graph(const Graph& g,
                                                  const std::vector<double>& sigma,
                                                  Rng& rng, const Tolerances& tol = {}) {
  if (static_cast<int>(sigma.size()) != g.order())
    throw std::invalid_argument("realize_block_graph: spectrum size mismatch");
  if (g.order() < 1) throw std::invalid_argument("realize_block_graph: empty graph");
  if (!is_connected(g))
    throw std::invalid_argument("realize_block_graph: graph not connected");
  if (!is_block_graph(g))
    throw std::invalid_argument("realize_block_graph: not a block graph");

  std::vector<double> sigma_sorted = sigma;
  std::sort(sigma_sorted.begin(), sigma_sorted.end());
  if (g.order() == 1) return detail::trivial_certificate(g, sigma_sorted[0]);

  const Spectrum sp = group_values(sigma_sorted, tol.group_tol);
  const BlowupSpec base = realization_base(g);
  const FeasibilitySearch fs = feasible_multiplicity(g, sp.multiplicities);

  if (!fs.witness) {
    if (fs.budget_exhausted && sp.groups() >= base.base.order()) {
      const BlowupRealization r = realize_blowup_of(base, sigma_sorted, rng, tol);
      RealizationCertificate cert =
          detail::blowup_certificate(g, sigma_sorted, base, r, tol);
      cert.stages.insert(cert.stages.begin(),
                         "witness search hit its budget; blowup route");
      return cert;
    }
    if (fs.budget_exhausted)
      throw NotCertifiedError(
          "realize_block_graph: witness search hit its budget and no fallback "
          "route applies");
    throw NotCertifiedError(
        "realize_block_graph: no feasible multiplicity assignment exists for "
        "this graph");
  }

  std::string last_error;
  for (int attempt = 0; attempt < 3; ++attempt) {
    try {
      return detail::realize_block_graph_attempt(g, sigma_sorted, sp, base,
                                                 *fs.witness, rng, tol);
    } catch (const ConstructionError& e) {
      last_error = e.what();
    }
  }
  throw ConstructionError("realize_block_graph: all attempts failed; last: " +
                          last_error);
}

/// Realize a spectrum on the lollipop graph (K_k with a pendant path of p
/// extra vertices). Needs at least p + 2 distinct eigenvalues; below that the
/// spectrum is rejected outright.
inline RealizationCertificate realize_lollipop(int k, int p,
                                               const std::vector<double>& sigma,
                                               Rng& rng, const Tolerances& tol = {}) {
  const Graph g = lollipop(k, p);
  if (static_cast<int>(sigma.size()) != g.order())
    throw std::invalid_argument("realize_lollipop: spectrum size mismatch");
  std::vector<double> sigma_sorted = sigma;
  std::sort(sigma_sorted.begin(), sigma_sorted.end());
  const Spectrum sp = group_values(sigma_sorted, tol.group_tol);
  if (sp.groups() < p + 2) {
    std::ostringstream msg;
    msg << "realize_lollipop: a matrix on this graph has at least " << p + 2
        << " distinct eigenvalues, got " << sp.groups();
    throw InfeasibleError(msg.str(), p + 2);
  }
  std::vector<int> mult(static_cast<std::size_t>(p + 2), 1);
  mult[0] = k - 1;
  const BlowupSpec spec = blowup(path(p + 2), mult);
  const BlowupRealization r = realize_blowup_of(spec, sigma_sorted, rng, tol);
  return detail::blowup_certificate(g, sigma_sorted, spec, r, tol);
}

/// Realize a spectrum on the barbell graph (cliques K_k1 and K_k2 joined by a
/// path with p interior vertices). Needs at least p + 4 distinct eigenvalues.
inline RealizationCertificate realize_barbell(int k1, int p, int k2,
                                              const std::vector<double>& sigma,
                                              Rng& rng, const Tolerances& tol = {}) {
  const Graph g = barbell(k1, p, k2);
  if (static_cast<int>(sigma.size()) != g.order())
    throw std::invalid_argument("realize_barbell: spectrum size mismatch");
  std::vector<double> sigma_sorted = sigma;
  std::sort(sigma_sorted.begin(), sigma_sorted.end());
  const Spectrum sp = group_values(sigma_sorted, tol.group_tol);
  if (sp.groups() < p + 4) {
    std::ostringstream msg;
    msg << "realize_barbell: a matrix on this graph has at least " << p + 4
        << " distinct eigenvalues, got " << sp.groups();
    throw InfeasibleError(msg.str(), p + 4);
  }
  std::vector<int> mult(static_cast<std::size_t>(p + 4), 1);
  mult[0] = k1 - 1;
  mult[static_cast<std::size_t>(p + 3)] = k2 - 1;
  const BlowupSpec spec = blowup(path(p + 4), mult);
  const BlowupRealization r = realize_blowup_of(spec, sigma_sorted, rng, tol);
  return detail::blowup_certificate(g, sigma_sorted, spec, r, tol);
}

enum class Feasibility { feasible, infeasible, unknown };

struct FamilyFeasibility {
  Feasibility status = Feasibility::unknown;
  int threshold = 0;  // required number of distinct eigenvalues
  std::string reason;
};

/// Counting check for a path of cliques K_{b_1} - ... - K_{b_h} (consecutive
/// cliques share one vertex). Any matrix on it has more than h distinct
/// eigenvalues, so h or fewer is rejected outright; h + 1 or more is known
/// sufficient when every interior clique except at most one is an edge; the
/// remaining shapes stay open.
inline FamilyFeasibility feasibility_check_clique_path(
    const std::vector<int>& sizes, const std::vector<double>& sigma,
    const Tolerances& tol = {}) {
  const Graph g = clique_path(sizes);
  if (static_cast<int>(sigma.size()) != g.order())
    throw std::invalid_argument("feasibility_check_clique_path: spectrum size mismatch");
  const int h = static_cast<int>(sizes.size());
  FamilyFeasibility out;
  out.threshold = h + 1;
  const int d = group_values(sigma, tol.group_tol).groups();
  if (d <= h) {
    out.status = Feasibility::infeasible;
    std::ostringstream msg;
    if (h == 1)
      msg << "a matrix on a complete graph has at least 2 distinct eigenvalues, got "
          << d;
    else
      msg << "a matrix on a path of " << h << " cliques has at least " << h + 1
          << " distinct eigenvalues, got " << d;
    out.reason = msg.str();
    return out;
  }
  int wide_interior = 0;
  for (int i = 1; i + 1 < h; ++i)
    if (sizes[static_cast<std::size_t>(i)] > 2) ++wide_interior;
  if (wide_interior <= 1) {
    out.status = Feasibility::feasible;
    out.reason = "enough distinct eigenvalues for this clique-path shape";
  } else {
    out.reason =
        "more than one interior clique is larger than an edge; no decision "
        "procedure applies";
  }
  return out;
}

/// General entry point: dispatch on the shape of the graph. Block graphs run
/// the witness pipeline; a graph that collapses under closed-twin merging
/// runs the blowup route on its quotient; a twin-free graph with all-distinct
/// eigenvalues is realized directly. Anything else is not certified.
inline RealizationCertificate realize(const Graph& g, const std::vector<double>& sigma,
                                      Rng& rng, const Tolerances& tol = {}) {
  if (static_cast<int>(sigma.size()) != g.order())
    throw std::invalid_argument("realize: spectrum size mismatch");
  if (g.order() < 1) throw std::invalid_argument("realize: empty graph");
  if (!is_connected(g)) throw std::invalid_argument("realize: graph not connected");

  if (is_block_graph(g)) return realize_block_graph(g, sigma, rng, tol);

  std::vector<double> sigma_sorted = sigma;
  std::sort(sigma_sorted.begin(), sigma_sorted.end());
  const Spectrum sp = group_values(sigma_sorted, tol.group_tol);
  const BlowupSpec spec = twin_reduction(g);

  if (spec.base.order() == g.order()) {
    if (sp.groups() != g.order())
      throw NotCertifiedError(
          "realize: graph has no closed twins and the spectrum has repeated "
          "values; no route applies");
    std::string last_error;
    for (int attempt = 0; attempt < 3; ++attempt) {
      try {
        RealizationCertificate cert;
        cert.graph = g;
        cert.target = sigma_sorted;
        cert.matrix = diag_avoiding_realize(g, sigma_sorted, {}, rng, tol);
        cert.reduced_ssp = has_ssp(cert.matrix, g, tol);
        cert.stages.push_back("direct: all eigenvalues distinct");
        double scale = 1.0;
        for (double v : sigma_sorted) scale = std::max(scale, 1.0 + std::abs(v));
        cert.spectral_deviation = multiset_distance(eigvals(cert.matrix), sigma_sorted);
        cert.pattern_ok = in_pattern_strict(cert.matrix, g, tol.zero_tol);
        if (cert.spectral_deviation > 1e-6 * scale)
          throw ConstructionError("realize: spectrum missed the target");
        if (!cert.pattern_ok)
          throw ConstructionError("realize: support does not match the graph");
        return cert;
      } catch (const ConstructionError& e) {
        last_error = e.what();
      }
    }
    throw ConstructionError("realize: all attempts failed; last: " + last_error);
  }

  if (sp.groups() < spec.base.order())
    throw NotCertifiedError(
        "realize: the closed-twin quotient needs at least as many distinct "
        "eigenvalues as it has vertices");
  const BlowupRealization r = realize_blowup_of(spec, sigma_sorted, rng, tol);
  RealizationCertificate cert = detail::blowup_certificate(g, sigma_sorted, spec, r, tol);
  cert.stages.insert(cert.stages.begin(), "closed-twin quotient");
  return cert;
}

}  // namespace iepg
