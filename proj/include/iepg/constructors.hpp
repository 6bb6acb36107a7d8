#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "iepg/continuation.hpp"
#include "iepg/eigh.hpp"
#include "iepg/errors.hpp"
#include "iepg/graph.hpp"
#include "iepg/rng.hpp"
#include "iepg/spectrum.hpp"
#include "iepg/symmat.hpp"

namespace iepg {

/// Two-by-two block matrix whose blocks are rank-one updates of scaled
/// identities:
///
///   [ alpha1 x x^T + beta1 I      gamma x y^T            ]
///   [ gamma y x^T                 alpha2 y y^T + beta2 I ]
///
/// Its spectrum is beta1 and beta2 with multiplicities |x|-1 and |y|-1, plus
/// the two eigenvalues of the 2x2 compression onto span(x (+) 0, 0 (+) y).
struct RankOneBlockParams {
  std::vector<double> x;
  std::vector<double> y;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double gamma = 0.0;
};

inline SymMatrix rank_one_block_matrix(const RankOneBlockParams& p) {
  const int n1 = static_cast<int>(p.x.size());
  const int n2 = static_cast<int>(p.y.size());
  if (n1 < 1 || n2 < 1)
    throw std::invalid_argument("rank_one_block_matrix: blocks must be nonempty");
  SymMatrix c(n1 + n2);
  for (int i = 0; i < n1; ++i)
    for (int j = i; j < n1; ++j)
      c.set(i, j, p.alpha1 * p.x[i] * p.x[j] + (i == j ? p.beta1 : 0.0));
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) c.set(i, n1 + j, p.gamma * p.x[i] * p.y[j]);
  for (int i = 0; i < n2; ++i)
    for (int j = i; j < n2; ++j)
      c.set(n1 + i, n1 + j, p.alpha2 * p.y[i] * p.y[j] + (i == j ? p.beta2 : 0.0));
  return c;
}

/// Predicted spectrum of rank_one_block_matrix(p), ascending.
inline std::vector<double> rank_one_block_spectrum(const RankOneBlockParams& p) {
  const int n1 = static_cast<int>(p.x.size());
  const int n2 = static_cast<int>(p.y.size());
  if (n1 < 1 || n2 < 1)
    throw std::invalid_argument("rank_one_block_spectrum: blocks must be nonempty");
  double nx2 = 0.0, ny2 = 0.0;
  for (double v : p.x) nx2 += v * v;
  for (double v : p.y) ny2 += v * v;
  const double a = p.alpha1 * nx2 + p.beta1;
  const double d = p.alpha2 * ny2 + p.beta2;
  const double b = p.gamma * std::sqrt(nx2 * ny2);
  const double mean = 0.5 * (a + d);
  const double r = std::hypot(0.5 * (a - d), b);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n1 + n2));
  out.push_back(mean - r);
  out.push_back(mean + r);
  for (int i = 1; i < n1; ++i) out.push_back(p.beta1);
  for (int i = 1; i < n2; ++i) out.push_back(p.beta2);
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

/// Unit vector with prescribed sign pattern; magnitudes drawn away from zero
/// so no entry can collapse under later scaling.
inline std::vector<double> unit_signed(Rng& rng, const std::vector<int>& signs) {
  std::vector<double> u(signs.size(), 0.0);
  double norm2 = 0.0;
  for (std::size_t i = 0; i < signs.size(); ++i) {
    if (signs[i] == 0) continue;
    u[i] = (signs[i] > 0 ? 1.0 : -1.0) * rng.uniform(0.3, 1.0);
    norm2 += u[i] * u[i];
  }
  const double norm = std::sqrt(norm2);
  for (double& v : u) v /= norm;
  return u;
}

inline double smallest_offdiag_abs(const SymMatrix& a) {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < a.order(); ++i)
    for (int j = i + 1; j < a.order(); ++j) m = std::min(m, std::abs(a(i, j)));
  return m;
}

}  // namespace detail

/// Matrix with every off-diagonal entry nonzero and spectrum
/// {lambda1^n1, lambda2^n2}, built from rank_one_block_matrix with
/// beta1 = lambda1, beta2 = lambda2, alpha2 = -alpha1 and
/// gamma = sqrt(alpha1 (lambda2 - lambda1 - alpha1)), which pins the 2x2
/// compression's eigenvalues to exactly lambda1 and lambda2. Draws are
/// rejected until every eigenvalue of every one-vertex deletion stays clear of
/// forbid_submatrix and every diagonal entry stays clear of forbid_diag.
inline SymMatrix two_eig_complete(double lambda1, int n1, double lambda2, int n2,
                                  const std::vector<double>& forbid_submatrix,
                                  const std::vector<double>& forbid_diag, Rng& rng,
                                  const Tolerances& tol = {}, int budget = 200) {
  if (n1 < 1 || n2 < 1)
    throw std::invalid_argument("two_eig_complete: multiplicities must be >= 1");
  if (std::abs(lambda1 - lambda2) <= tol.group_tol)
    throw std::invalid_argument("two_eig_complete: eigenvalues must be separated");
  if (distance_to_set(lambda1, forbid_submatrix) <= tol.group_tol ||
      distance_to_set(lambda2, forbid_submatrix) <= tol.group_tol)
    throw std::invalid_argument(
        "two_eig_complete: forbidden submatrix values may not meet the target "
        "eigenvalues");

  double lo = lambda1, hi = lambda2;
  int nlo = n1, nhi = n2;
  if (lo > hi) {
    std::swap(lo, hi);
    std::swap(nlo, nhi);
  }
  const double gap = hi - lo;
  const int n = nlo + nhi;
  std::vector<double> expected;
  expected.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < nlo; ++i) expected.push_back(lo);
  for (int i = 0; i < nhi; ++i) expected.push_back(hi);
  const double scale = 1.0 + std::max(std::abs(lo), std::abs(hi));
  const double entry_floor = std::max(tol.zero_tol, 1e-6);

  for (int attempt = 0; attempt < budget; ++attempt) {
    const double alpha = rng.uniform(0.05, 0.95) * gap;
    RankOneBlockParams p;
    p.x = detail::unit_signed(rng, std::vector<int>(static_cast<std::size_t>(nlo), 1));
    p.y = detail::unit_signed(rng, std::vector<int>(static_cast<std::size_t>(nhi), 1));
    p.alpha1 = alpha;
    p.alpha2 = -alpha;
    p.beta1 = lo;
    p.beta2 = hi;
    p.gamma = std::sqrt(alpha * (gap - alpha));
    const SymMatrix c = rank_one_block_matrix(p);

    if (detail::smallest_offdiag_abs(c) <= entry_floor) continue;
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      if (distance_to_set(c(i, i), forbid_diag) <= tol.group_tol) ok = false;
    for (int v = 0; v < n && ok && n > 1; ++v)
      for (double mu : eigvals(principal_submatrix(c, v)))
        if (distance_to_set(mu, forbid_submatrix) <= tol.group_tol) {
          ok = false;
          break;
        }
    if (!ok) continue;
    if (multiset_distance(eigvals(c), expected) > 100.0 * tol.eig_tol * scale)
      throw ConstructionError("two_eig_complete: spectrum drifted off the target");
    return c;
  }
  std::ostringstream msg;
  msg << "two_eig_complete: no admissible draw in " << budget << " attempts for {"
      << lambda1 << "^" << n1 << ", " << lambda2 << "^" << n2 << "}";
  throw ConstructionError(msg.str());
}

/// Matrix with every off-diagonal entry nonzero realizing the eigenvalue
/// multiset mus, where mus[0] carries a unit eigenvector with the given sign
/// pattern. The pattern needs at least two nonzero entries (a standard basis
/// vector can never be an eigenvector of such a matrix) and mus must contain
/// two separated values.
struct EigvecCompletion {
  SymMatrix b{0};
  std::vector<double> u;
};

inline EigvecCompletion complete_with_eigvec(const std::vector<double>& mus,
                                             const std::vector<int>& signs, Rng& rng,
                                             const Tolerances& tol = {},
                                             int budget = 200) {
  const int k = static_cast<int>(mus.size());
  if (k < 1) throw std::invalid_argument("complete_with_eigvec: empty spectrum");
  if (static_cast<int>(signs.size()) != k)
    throw std::invalid_argument("complete_with_eigvec: sign pattern size mismatch");
  if (k == 1) {
    if (signs[0] == 0)
      throw std::invalid_argument("complete_with_eigvec: eigenvector cannot be zero");
    EigvecCompletion out;
    out.b = SymMatrix::diagonal({mus[0]});
    out.u = {signs[0] > 0 ? 1.0 : -1.0};
    return out;
  }
  const auto [mn, mx] = std::minmax_element(mus.begin(), mus.end());
  if (*mx - *mn <= tol.group_tol)
    throw std::invalid_argument(
        "complete_with_eigvec: a constant multiset only admits a scaled identity");
  int nonzero = 0;
  for (int s : signs)
    if (s != 0) ++nonzero;
  if (nonzero < 2)
    throw std::invalid_argument(
        "complete_with_eigvec: the sign pattern needs at least two nonzero entries");

  const double scale = 1.0 + std::max(std::abs(*mn), std::abs(*mx));
  const double entry_floor = std::max(tol.zero_tol, 1e-6);

  for (int attempt = 0; attempt < budget; ++attempt) {
    std::vector<double> u = detail::unit_signed(rng, signs);
    Matrix q(k, k);
    for (int i = 0; i < k; ++i) q(i, 0) = u[i];
    bool built = true;
    for (int c = 1; c < k && built; ++c) {
      bool placed = false;
      for (int draw = 0; draw < 100 && !placed; ++draw) {
        std::vector<double> w(k);
        for (int i = 0; i < k; ++i) w[i] = rng.uniform(-1.0, 1.0);
        for (int pc = 0; pc < c; ++pc) {
          double dot = 0.0;
          for (int i = 0; i < k; ++i) dot += w[i] * q(i, pc);
          for (int i = 0; i < k; ++i) w[i] -= dot * q(i, pc);
        }
        double norm2 = 0.0;
        for (double v : w) norm2 += v * v;
        if (norm2 < 0.01) continue;
        const double norm = std::sqrt(norm2);
        for (int i = 0; i < k; ++i) q(i, c) = w[i] / norm;
        placed = true;
      }
      built = placed;
    }
    if (!built) continue;
    SymMatrix b(k);
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) {
        double s = 0.0;
        for (int c = 0; c < k; ++c) s += mus[c] * q(i, c) * q(j, c);
        b.set(i, j, s);
      }
    if (detail::smallest_offdiag_abs(b) <= entry_floor) continue;
    const std::vector<double> bu = b.apply(u);
    double resid = 0.0;
    for (int i = 0; i < k; ++i)
      resid = std::max(resid, std::abs(bu[i] - mus[0] * u[i]));
    if (resid > 1e-8 * scale)
      throw ConstructionError("complete_with_eigvec: eigenvector drifted");
    EigvecCompletion out;
    out.b = std::move(b);
    out.u = std::move(u);
    return out;
  }
  std::ostringstream msg;
  msg << "complete_with_eigvec: no admissible draw in " << budget << " attempts ("
      << k << " values)";
  throw ConstructionError(msg.str());
}

/// Expand vertex v of A into a block. B must satisfy B u = A(v, v) u with u a
/// unit vector. The result has v replaced by the k consecutive indices
/// v..v+k-1 carrying B, coupled to the old neighbors of v through the rank-one
/// profile u; its spectrum is spec(A) united with spec(B) minus one copy of
/// A(v, v).
inline SymMatrix duplicate_vertex(const SymMatrix& a, int v, const SymMatrix& b,
                                  const std::vector<double>& u,
                                  const Tolerances& tol = {}) {
  const int n = a.order();
  const int k = b.order();
  if (v < 0 || v >= n) throw std::invalid_argument("duplicate_vertex: v out of range");
  if (k < 1) throw std::invalid_argument("duplicate_vertex: empty block");
  if (static_cast<int>(u.size()) != k)
    throw std::invalid_argument("duplicate_vertex: eigenvector size mismatch");
  double norm2 = 0.0;
  for (double x : u) norm2 += x * x;
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-8)
    throw std::invalid_argument("duplicate_vertex: eigenvector must be unit");
  const std::vector<double> bu = b.apply(u);
  const double mu = a(v, v);
  double resid = 0.0;
  for (int i = 0; i < k; ++i) resid = std::max(resid, std::abs(bu[i] - mu * u[i]));
  if (resid > tol.eig_tol * (1.0 + b.frobenius()))
    throw std::invalid_argument(
        "duplicate_vertex: A(v,v) must be an eigenvalue of the block with "
        "eigenvector u");

  auto map = [v, k](int p) { return p < v ? p : p + k - 1; };
  SymMatrix c(n + k - 1);
  for (int p = 0; p < n; ++p) {
    if (p == v) continue;
    for (int q = p; q < n; ++q) {
      if (q == v) continue;
      c.set(map(p), map(q), a(p, q));
    }
    for (int t = 0; t < k; ++t) c.set(map(p), v + t, a(p, v) * u[t]);
  }
  for (int s = 0; s < k; ++s)
    for (int t = s; t < k; ++t) c.set(v + s, v + t, b(s, t));
  return c;
}

/// Arrow matrix on the star with center 0: diagonal mus on the leaves,
/// off-diagonal weights down the first row, and center entry fixed by the
/// trace. Strict interlacing lambda_0 < mu_0 < lambda_1 < ... makes every
/// weight a real positive square root and the spectrum exactly lambdas.
inline SymMatrix arrow_realize(const std::vector<double>& lambdas,
                               const std::vector<double>& mus,
                               const Tolerances& tol = {}) {
  const int n = static_cast<int>(lambdas.size());
  if (n < 1) throw std::invalid_argument("arrow_realize: empty spectrum");
  if (static_cast<int>(mus.size()) != n - 1)
    throw std::invalid_argument("arrow_realize: need exactly n-1 interior values");
  for (int i = 0; i + 1 < n; ++i)
    if (!(lambdas[i] < mus[i] && mus[i] < lambdas[i + 1]))
      throw std::invalid_argument("arrow_realize: sequences must strictly interlace");
  if (n == 1) return SymMatrix::diagonal({lambdas[0]});

  double trace_gap = 0.0;
  for (double l : lambdas) trace_gap += l;
  for (double m : mus) trace_gap -= m;

  SymMatrix a(n);
  a.set(0, 0, trace_gap);
  for (int i = 0; i + 1 < n; ++i) {
    double num = 1.0;
    for (int j = 0; j < n; ++j) num *= mus[i] - lambdas[j];
    double den = 1.0;
    for (int m = 0; m + 1 < n; ++m)
      if (m != i) den *= mus[i] - mus[m];
    const double radicand = -num / den;
    if (!(radicand > 0.0))
      throw ConstructionError("arrow_realize: interlacing gap too thin to place a weight");
    const double w = std::sqrt(radicand);
    if (w <= tol.zero_tol)
      throw ConstructionError("arrow_realize: arrow weight collapsed below the zero threshold");
    a.set(0, i + 1, w);
    a.set(i + 1, i + 1, mus[i]);
  }
  double lmax = 1.0;
  for (double l : lambdas) lmax = std::max(lmax, 1.0 + std::abs(l));
  if (multiset_distance(eigvals(a), lambdas) > 1e-8 * lmax)
    throw ConstructionError("arrow_realize: spectrum drifted off the target");
  return a;
}

/// Realize a blowup: expand each base vertex of A into its clique of copies,
/// absorbing the extra eigenvalues. The extra values are sorted and sliced in
/// base-vertex order, so each expanded vertex contributes its diagonal entry
/// plus a consecutive run of extras; every diagonal entry of A must be
/// separated from all extras. The result lives on blowup_graph(spec), labels
/// included, and its spectrum is spec(A) united with the extras.
inline SymMatrix blowup_realize(const SymMatrix& a, std::vector<double> extras,
                                const BlowupSpec& spec, Rng& rng,
                                const Tolerances& tol = {}) {
  const int n0 = a.order();
  if (spec.base.order() != n0)
    throw std::invalid_argument("blowup_realize: base order mismatch");
  if (static_cast<int>(extras.size()) != spec.blown_order() - n0)
    throw std::invalid_argument("blowup_realize: wrong number of extra eigenvalues");
  for (int i = 0; i < n0; ++i)
    if (distance_to_set(a(i, i), extras) <= tol.group_tol)
      throw std::invalid_argument(
          "blowup_realize: a diagonal entry meets an extra eigenvalue");

  std::sort(extras.begin(), extras.end());
  std::vector<double> combined = eigvals(a);
  combined.insert(combined.end(), extras.begin(), extras.end());

  SymMatrix c = a;
  int pos = 0;
  std::size_t cursor = 0;
  for (int i = 0; i < n0; ++i) {
    const int m = spec.multiplicities[i];
    if (m > 1) {
      std::vector<double> mus;
      mus.reserve(static_cast<std::size_t>(m));
      mus.push_back(c(pos, pos));
      for (int t = 0; t + 1 < m; ++t) mus.push_back(extras[cursor + t]);
      EigvecCompletion comp = complete_with_eigvec(
          mus, std::vector<int>(static_cast<std::size_t>(m), 1), rng, tol);
      c = duplicate_vertex(c, pos, comp.b, comp.u, tol);
      cursor += static_cast<std::size_t>(m - 1);
    }
    pos += m;
  }

  std::vector<int> perm(static_cast<std::size_t>(spec.blown_order()));
  {
    int c_idx = 0;
    for (int i = 0; i < n0; ++i)
      for (int label : spec.group(i)) perm[static_cast<std::size_t>(c_idx++)] = label;
  }
  bool identity = true;
  for (std::size_t i = 0; i < perm.size(); ++i)
    if (perm[i] != static_cast<int>(i)) identity = false;
  if (!identity) c = permute(c, perm);

  if (!in_pattern_strict(c, blowup_graph(spec), tol.zero_tol))
    throw ConstructionError(
        "blowup_realize: an entry collapsed below the zero threshold");
  double scale = 1.0;
  for (double v : combined) scale = std::max(scale, 1.0 + std::abs(v));
  if (multiset_distance(eigvals(c), combined) > 100.0 * tol.eig_tol * scale)
    throw ConstructionError("blowup_realize: spectrum drifted off the target");
  return c;
}

/// Realize distinct eigenvalues on a connected graph while keeping every
/// diagonal entry away from the forbidden values. Internally: cover the graph
/// by a spanning forest of stars, give each star an arrow matrix over a
/// consecutive slice of the sorted spectrum (interior values jittered around
/// midpoints until all diagonals clear the forbidden set), then fill in the
/// remaining edges with an isospectral perturbation that preserves the strong
/// spectral property.
inline SymMatrix diag_avoiding_realize(const Graph& g, std::vector<double> sigma,
                                       const std::vector<double>& forbid, Rng& rng,
                                       const Tolerances& tol = {}) {
  const int n = g.order();
  if (static_cast<int>(sigma.size()) != n)
    throw std::invalid_argument("diag_avoiding_realize: spectrum size mismatch");
  if (!is_connected(g))
    throw std::invalid_argument("diag_avoiding_realize: graph must be connected");
  std::sort(sigma.begin(), sigma.end());
  for (int i = 0; i + 1 < n; ++i)
    if (sigma[i + 1] - sigma[i] <= tol.group_tol)
      throw std::invalid_argument("diag_avoiding_realize: eigenvalues must be distinct");
  if (n == 1) {
    if (distance_to_set(sigma[0], forbid) <= tol.group_tol)
      throw std::invalid_argument(
          "diag_avoiding_realize: on one vertex the diagonal is the eigenvalue");
    return SymMatrix::diagonal({sigma[0]});
  }

  const std::vector<Star> stars = spanning_star_forest(g);
  SymMatrix ah(n);
  std::vector<std::pair<int, int>> star_edges;
  std::size_t cursor = 0;
  for (const Star& st : stars) {
    const int o = st.order();
    std::vector<double> slice(sigma.begin() + static_cast<std::ptrdiff_t>(cursor),
                              sigma.begin() + static_cast<std::ptrdiff_t>(cursor + o));
    cursor += static_cast<std::size_t>(o);

    std::vector<double> mus(static_cast<std::size_t>(o - 1));
    bool found = false;
    for (int attempt = 0; attempt < 200 && !found; ++attempt) {
      const double req =
          std::max(2.0 * tol.group_tol, 10.0 * tol.group_tol * std::pow(0.5, attempt / 50));
      bool ok = true;
      double center = 0.0;
      for (double l : slice) center += l;
      for (int i = 0; i + 1 < o; ++i) {
        const double lo = slice[static_cast<std::size_t>(i)];
        const double hi = slice[static_cast<std::size_t>(i) + 1];
        const double mid = 0.5 * (lo + hi);
        const double m = mid + 0.25 * (hi - lo) * rng.uniform(-1.0, 1.0);
        mus[static_cast<std::size_t>(i)] = m;
        center -= m;
        if (distance_to_set(m, forbid) <= req) ok = false;
      }
      if (ok && distance_to_set(center, forbid) <= req) ok = false;
      found = ok;
    }
    if (!found)
      throw ConstructionError(
          "diag_avoiding_realize: could not steer a star's diagonal clear of the "
          "forbidden values");

    const SymMatrix arrow = arrow_realize(slice, mus, tol);
    ah.set(st.center, st.center, arrow(0, 0));
    for (std::size_t t = 0; t < st.leaves.size(); ++t) {
      const int leaf = st.leaves[t];
      ah.set(st.center, leaf, arrow(0, static_cast<int>(t) + 1));
      ah.set(leaf, leaf, arrow(static_cast<int>(t) + 1, static_cast<int>(t) + 1));
      star_edges.emplace_back(std::min(st.center, leaf), std::max(st.center, leaf));
    }
  }
  const Graph h(n, star_edges);
  if (h == g) return ah;

  double diag_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    diag_margin = std::min(diag_margin, distance_to_set(ah(i, i), forbid));
  double eps = std::min(0.02 * (1.0 + ah.frobenius()), 0.4 * diag_margin);

  for (int attempt = 0; attempt < 4; ++attempt, eps *= 0.25) {
    SymMatrix a{0};
    try {
      a = ssp_supergraph_perturb(ah, h, g, eps, tol);
    } catch (const ConstructionError&) {
      continue;
    }
    if (!in_pattern_strict(a, g, tol.zero_tol)) continue;
    bool clear = true;
    for (int i = 0; i < n && clear; ++i)
      if (distance_to_set(a(i, i), forbid) <= tol.group_tol) clear = false;
    if (clear) return a;
  }
  throw ConstructionError(
      "diag_avoiding_realize: could not fill the pattern while keeping the "
      "diagonal clear");
}

}  // namespace iepg
