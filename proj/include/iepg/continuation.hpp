#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "iepg/eigh.hpp"
#include "iepg/errors.hpp"
#include "iepg/graph.hpp"
#include "iepg/spectrum.hpp"
#include "iepg/ssp.hpp"
#include "iepg/symmat.hpp"

namespace iepg {

/// One pinned entry of a pattern-constrained iterate: position (i, j) is
/// reset to exactly `value` by every pattern projection. The position must be
/// a diagonal slot or an edge of the pattern graph.
struct PinnedEntry {
  int i = 0;
  int j = 0;
  double value = 0.0;
};

struct ContinuationProblem {
  SymMatrix start{0};
  std::vector<double> target;  // wanted eigenvalue multiset, any order
  Graph pattern{0, {}};        // allowed off-diagonal support
  std::vector<PinnedEntry> pinned;
  int max_iterations = 500;
  int stall_window = 50;
  Tolerances tol;
};

struct ContinuationResult {
  SymMatrix matrix{0};
  bool converged = false;
  int iterations = 0;
  double spectral_residual = std::numeric_limits<double>::infinity();
  std::vector<double> residual_history;
};

/// Nearest symmetric matrix with the given eigenvalue multiset, built from an
/// existing eigendecomposition: keep the eigenvectors, replace the ascending
/// eigenvalues by the ascending target values.
inline SymMatrix replace_spectrum(const EighResult& eg,
                                  const std::vector<double>& target_sorted) {
  const int n = static_cast<int>(eg.values.size());
  if (static_cast<int>(target_sorted.size()) != n)
    throw std::invalid_argument("replace_spectrum: size mismatch");
  SymMatrix b(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k)
        s += target_sorted[k] * eg.vectors(i, k) * eg.vectors(j, k);
      b.set(i, j, s);
    }
  return b;
}

inline SymMatrix project_isospectral(const SymMatrix& a,
                                     std::vector<double> target) {
  if (static_cast<int>(target.size()) != a.order())
    throw std::invalid_argument("project_isospectral: size mismatch");
  std::sort(target.begin(), target.end());
  return replace_spectrum(eigh(a), target);
}

/// Zero every off-diagonal entry outside the pattern, then force the pinned
/// entries to their prescribed values.
inline SymMatrix project_pattern(const SymMatrix& a, const Graph& h,
                                 const std::vector<PinnedEntry>& pinned = {}) {
  if (h.order() != a.order())
    throw std::invalid_argument("project_pattern: order mismatch");
  SymMatrix b(a.order());
  for (int i = 0; i < a.order(); ++i) b.set(i, i, a(i, i));
  for (const auto& [i, j] : h.edges()) b.set(i, j, a(i, j));
  for (const PinnedEntry& p : pinned) {
    if (p.i < 0 || p.j < 0 || p.i >= a.order() || p.j >= a.order())
      throw std::invalid_argument("project_pattern: pinned entry out of range");
    if (p.i != p.j && !h.adjacent(p.i, p.j))
      throw std::invalid_argument("project_pattern: pinned entry off the pattern");
    b.set(p.i, p.j, p.value);
  }
  return b;
}

namespace detail {

/// Largest violation of the pattern constraints: off-pattern magnitude or
/// deviation of a pinned entry from its prescribed value.
inline double pattern_deviation(const SymMatrix& a, const Graph& h,
                                const std::vector<PinnedEntry>& pinned) {
  double d = 0.0;
  for (int i = 0; i < a.order(); ++i)
    for (int j = i + 1; j < a.order(); ++j)
      if (!h.adjacent(i, j)) d = std::max(d, std::abs(a(i, j)));
  for (const PinnedEntry& p : pinned)
    d = std::max(d, std::abs(a(p.i, p.j) - p.value));
  return d;
}

}  // namespace detail

/// Alternating projections between the isospectral manifold of the target
/// multiset and the affine set of pattern-supported matrices with pinned
/// entries. Converged means the iterate satisfies the pattern exactly and its
/// spectrum matches the target within 10 * eig_tol relative to the target
/// scale. Deterministic: no randomness anywhere in the loop.
inline ContinuationResult solve(const ContinuationProblem& p) {
  const int n = p.start.order();
  if (p.pattern.order() != n)
    throw std::invalid_argument("continuation solve: pattern order mismatch");
  if (static_cast<int>(p.target.size()) != n)
    throw std::invalid_argument("continuation solve: target size mismatch");
  for (const PinnedEntry& e : p.pinned) {
    if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n)
      throw std::invalid_argument("continuation solve: pinned entry out of range");
    if (e.i != e.j && !p.pattern.adjacent(e.i, e.j))
      throw std::invalid_argument("continuation solve: pinned entry off the pattern");
  }

  std::vector<double> t = p.target;
  std::sort(t.begin(), t.end());
  double scale = 1.0;
  for (double x : t) scale = std::max(scale, 1.0 + std::abs(x));
  const double resid_tol = 10.0 * p.tol.eig_tol * scale;

  ContinuationResult out;
  SymMatrix a = p.start;
  double best = std::numeric_limits<double>::infinity();
  int since_best = 0;
  for (int it = 0;; ++it) {
    const EighResult eg = eigh(a);
    double resid = 0.0;
    for (int k = 0; k < n; ++k)
      resid = std::max(resid, std::abs(eg.values[k] - t[k]));
    out.residual_history.push_back(resid);
    out.iterations = it;
    out.spectral_residual = resid;
    const double pat = detail::pattern_deviation(a, p.pattern, p.pinned);
    if (resid <= resid_tol && pat <= 1e-12 * scale) {
      out.converged = true;
      break;
    }
    if (it >= p.max_iterations) break;
    if (resid < best * (1.0 - 1e-3)) {
      best = resid;
      since_best = 0;
    } else if (++since_best >= p.stall_window) {
      break;
    }
    a = project_pattern(replace_spectrum(eg, t), p.pattern, p.pinned);
  }
  out.matrix = a;
  return out;
}

/// Diagnostics from ssp_supergraph_perturb, for callers that want to log the
/// step-size ladder.
struct PerturbReport {
  int attempts = 0;
  double step_value = 0.0;
  std::vector<ContinuationResult> runs;
};

/// Move a matrix with the strong spectral property relative to H to a nearby
/// isospectral matrix whose support fills the larger pattern H'. The entries
/// on the new edges are pinned to a small common value s, halved on failure.
/// Returns a matrix within epsilon of A in Frobenius norm, exact on the new
/// edges, with the strong spectral property relative to H'; every entry of A
/// above zero_tol keeps a magnitude above zero_tol.
inline SymMatrix ssp_supergraph_perturb(const SymMatrix& a, const Graph& h,
                                        const Graph& hp, double epsilon,
                                        const Tolerances& tol = {},
                                        PerturbReport* report = nullptr) {
  const int n = a.order();
  if (h.order() != n || hp.order() != n)
    throw std::invalid_argument("ssp_supergraph_perturb: order mismatch");
  if (!is_subgraph(h, hp))
    throw std::invalid_argument("ssp_supergraph_perturb: H' must contain H");
  if (!(epsilon > 0.0))
    throw std::invalid_argument("ssp_supergraph_perturb: epsilon must be positive");
  if (!in_pattern_closed(a, h, tol.zero_tol))
    throw std::invalid_argument(
        "ssp_supergraph_perturb: matrix has support outside the base pattern");
  if (!has_ssp(a, h, tol).has_ssp)
    throw std::invalid_argument(
        "ssp_supergraph_perturb: base matrix lacks the strong spectral property");

  std::vector<std::pair<int, int>> new_edges;
  for (const auto& [i, j] : hp.edges())
    if (!h.adjacent(i, j)) new_edges.emplace_back(i, j);
  if (new_edges.empty()) return a;

  const std::vector<double> target = eigvals(a);
  const double scale = 1.0 + a.frobenius();
  double s = std::min(epsilon / (4.0 * static_cast<double>(new_edges.size()) + 1.0),
                      1e-2 * scale);

  std::vector<std::pair<int, int>> keep;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(a(i, j)) > tol.zero_tol) keep.emplace_back(i, j);

  const int attempts = 12;
  for (int attempt = 0; attempt < attempts; ++attempt, s *= 0.5) {
    ContinuationProblem prob;
    prob.start = a;
    prob.target = target;
    prob.pattern = hp;
    prob.tol = tol;
    for (const auto& [i, j] : new_edges) prob.pinned.push_back({i, j, s});
    ContinuationResult res = solve(prob);
    if (report) {
      report->attempts = attempt + 1;
      report->step_value = s;
      report->runs.push_back(res);
    }
    if (!res.converged) continue;
    const SymMatrix& ap = res.matrix;
    if ((ap - a).frobenius() >= epsilon) continue;
    bool survived = true;
    for (const auto& [i, j] : keep)
      if (std::abs(ap(i, j)) <= tol.zero_tol) {
        survived = false;
        break;
      }
    if (!survived) continue;
    if (!has_ssp(ap, hp, tol).has_ssp) continue;
    return ap;
  }
  std::ostringstream msg;
  msg << "ssp_supergraph_perturb: no admissible perturbation after " << attempts
      << " step sizes (epsilon=" << epsilon << ", " << new_edges.size()
      << " new edges)";
  throw ConstructionError(msg.str());
}

/// Pattern produced by appending a clique: s fresh vertices n..n+s-1, mutually
/// adjacent and all joined to v, so the new block is a K_{s+1} through v.
inline Graph clique_appended_graph(const Graph& g, int v, int s) {
  const int n = g.order();
  if (v < 0 || v >= n) throw std::invalid_argument("clique_appended_graph: v out of range");
  if (s < 1) throw std::invalid_argument("clique_appended_graph: s must be >= 1");
  std::vector<std::pair<int, int>> e = g.edges();
  for (int t = 0; t < s; ++t) {
    e.emplace_back(v, n + t);
    for (int u = t + 1; u < s; ++u) e.emplace_back(n + t, n + u);
  }
  return Graph(n + s, std::move(e));
}

/// Append a clique K_{s+1} through vertex v and extend A to a matrix on the
/// grown pattern whose spectrum is spec(A) together with s copies of lambda.
/// Requires A in S(G) with the strong spectral property and lambda clear of
/// spec(A) and spec(A with v deleted). The result again has the strong
/// spectral property, full support on the new block, and new diagonal entries
/// separated from lambda. epsilon_scale shrinks (or grows) the automatically
/// chosen perturbation radius.
inline SymMatrix append_clique(const SymMatrix& a, const Graph& g, int v,
                               double lambda, int s, const Tolerances& tol = {},
                               double epsilon_scale = 1.0,
                               Graph* out_graph = nullptr) {
  const int n = a.order();
  if (g.order() != n) throw std::invalid_argument("append_clique: order mismatch");
  if (v < 0 || v >= n) throw std::invalid_argument("append_clique: v out of range");
  if (s < 1) throw std::invalid_argument("append_clique: s must be >= 1");
  if (!in_pattern_strict(a, g, tol.zero_tol))
    throw std::invalid_argument("append_clique: matrix support must equal the base graph");
  if (!has_ssp(a, g, tol).has_ssp)
    throw std::invalid_argument("append_clique: base matrix lacks the strong spectral property");

  const std::vector<double> spec_a = eigvals(a);
  std::vector<double> spec_av;
  if (n > 1) spec_av = eigvals(principal_submatrix(a, v));
  const double gap = std::min(distance_to_set(lambda, spec_a),
                              distance_to_set(lambda, spec_av));
  if (gap <= tol.group_tol)
    throw std::invalid_argument(
        "append_clique: lambda too close to the spectrum of the matrix or of its "
        "submatrix at v");

  const SymMatrix start = direct_sum(a, SymMatrix::scaled_identity(s, lambda));
  const Graph h = disjoint_union(g, complete(s));
  const Graph hp = clique_appended_graph(g, v, s);
  const double scale = 1.0 + start.frobenius();
  const double eps0 =
      epsilon_scale * std::min(0.1 * scale, 0.45 * gap);

  double last_eps = -1.0;
  for (double factor : {1.0, 2.0, 0.5, 4.0, 0.25}) {
    const double eps = std::min(eps0 * factor, 0.45 * gap);
    if (std::abs(eps - last_eps) <= 1e-15 * scale) continue;
    last_eps = eps;
    SymMatrix ap{0};
    try {
      ap = ssp_supergraph_perturb(start, h, hp, eps, tol);
    } catch (const ConstructionError&) {
      continue;
    }
    if (!in_pattern_strict(ap, hp, tol.zero_tol)) continue;
    bool diag_ok = true;
    for (int t = 0; t < s; ++t)
      if (std::abs(ap(n + t, n + t) - lambda) <= tol.group_tol) {
        diag_ok = false;
        break;
      }
    if (!diag_ok) continue;
    if (out_graph) *out_graph = hp;
    return ap;
  }
  std::ostringstream msg;
  msg << "append_clique: no admissible extension at v=" << v << " lambda=" << lambda
      << " s=" << s;
  throw ConstructionError(msg.str());
}

/// One step of a clique chain: glue a K_{size+1} through `vertex` and give the
/// new block the eigenvalue `value` with multiplicity `size`.
struct CliqueAttachment {
  int vertex = 0;
  double value = 0.0;
  int size = 1;
};

struct AppendChainResult {
  SymMatrix matrix{0};
  Graph graph{0, {}};
};

/// Run a sequence of clique appends. The planned eigenvalues must be pairwise
/// separated and initially clear of the spectra of A and of every one-vertex
/// deletion of A; after each step the clearance of the remaining values is
/// re-checked against the grown matrix and all its one-vertex deletions, and
/// the step is retried with a smaller perturbation radius when a clearance is
/// lost. Attachment vertices may reference vertices created by earlier steps.
inline AppendChainResult append_cliques_chain(
    const SymMatrix& a, const Graph& g,
    const std::vector<CliqueAttachment>& plan, const Tolerances& tol = {}) {
  if (g.order() != a.order())
    throw std::invalid_argument("append_cliques_chain: order mismatch");
  for (std::size_t i = 0; i < plan.size(); ++i) {
    if (plan[i].size < 1)
      throw std::invalid_argument("append_cliques_chain: sizes must be >= 1");
    for (std::size_t j = i + 1; j < plan.size(); ++j)
      if (std::abs(plan[i].value - plan[j].value) <= tol.group_tol)
        throw std::invalid_argument(
            "append_cliques_chain: planned eigenvalues must be pairwise separated");
  }

  auto clear_of = [&tol](double value, const SymMatrix& m) {
    if (distance_to_set(value, eigvals(m)) <= tol.group_tol) return false;
    for (int u = 0; u < m.order(); ++u)
      if (m.order() > 1 &&
          distance_to_set(value, eigvals(principal_submatrix(m, u))) <= tol.group_tol)
        return false;
    return true;
  };

  for (const CliqueAttachment& att : plan)
    if (!clear_of(att.value, a))
      throw std::invalid_argument(
          "append_cliques_chain: a planned eigenvalue meets the spectrum of the "
          "matrix or of a one-vertex deletion");

  AppendChainResult out{a, g};
  for (std::size_t step = 0; step < plan.size(); ++step) {
    const CliqueAttachment& att = plan[step];
    if (att.vertex < 0 || att.vertex >= out.graph.order())
      throw std::invalid_argument("append_cliques_chain: attachment vertex not present");
    bool committed = false;
    for (int retry = 0; retry <= 3 && !committed; ++retry) {
      Graph grown{0, {}};
      SymMatrix next{0};
      try {
        next = append_clique(out.matrix, out.graph, att.vertex, att.value,
                             att.size, tol, std::pow(0.25, retry), &grown);
      } catch (const ConstructionError&) {
        continue;
      }
      bool clear = true;
      for (std::size_t later = step + 1; later < plan.size() && clear; ++later)
        clear = clear_of(plan[later].value, next);
      if (!clear) continue;
      out.matrix = next;
      out.graph = grown;
      committed = true;
    }
    if (!committed) {
      std::ostringstream msg;
      msg << "append_cliques_chain: step " << step << " (vertex " << att.vertex
          << ", value " << att.value << ", size " << att.size
          << ") failed after retries";
      throw ConstructionError(msg.str());
    }
  }
  return out;
}

}  // namespace iepg
