#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "iepg/eigh.hpp"
#include "iepg/spectrum.hpp"
#include "iepg/symmat.hpp"

namespace iepg {

/// The linear system behind the strong spectral property test relative to a
/// supergraph H. Unknowns are the entries X_ij over the non-edges {i,j} of H
/// (X has zero diagonal and vanishes on E(H)); the equations are the strict
/// upper triangle of [A, X] = 0. A has the property iff the operator has a
/// trivial kernel.
struct SspConstraintOperator {
  Matrix matrix;                                // C(n,2) rows, one column per free pair
  std::vector<std::pair<int, int>> free_pairs;  // lexicographic, i < j
};

/// Verdict of an SSP test. margin is the smallest singular value of the
/// constraint operator (+inf when the operator has no columns and the
/// property holds vacuously); marginal flags verdicts whose margin lies
/// within a decade of the rank cutoff and should not be trusted blindly.
struct SspVerdict {
  bool has_ssp = false;
  int kernel_dim = 0;
  double margin = 0.0;
  bool marginal = false;
  std::optional<SymMatrix> witness;
};

/// Build the constraint operator for (A, H). A is not required to lie in
/// S^cl(H); the test is meaningful when it does, which callers should check
/// with in_pattern_closed.
inline SspConstraintOperator build_ssp_operator(const SymMatrix& a, const Graph& h) {
  if (a.order() != h.order())
    throw std::invalid_argument("build_ssp_operator: matrix and graph order differ");
  const int n = a.order();

  SspConstraintOperator op;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!h.adjacent(i, j)) op.free_pairs.emplace_back(i, j);

  const int rows = n * (n - 1) / 2;
  op.matrix = Matrix(rows, static_cast<int>(op.free_pairs.size()));

  // Column for the pair {i,j}: strict upper triangle of [A, E_ij + E_ji],
  // which works out entrywise to a_ki d_lj + a_kj d_li - d_ki a_jl - d_kj a_il.
  for (std::size_t c = 0; c < op.free_pairs.size(); ++c) {
    const auto [i, j] = op.free_pairs[c];
    int r = 0;
    for (int k = 0; k < n; ++k)
      for (int l = k + 1; l < n; ++l, ++r) {
        double v = 0.0;
        if (l == j) v += a(k, i);
        if (l == i) v += a(k, j);
        if (k == i) v -= a(j, l);
        if (k == j) v -= a(i, l);
        op.matrix(r, static_cast<int>(c)) = v;
      }
  }
  return op;
}

/// Test the strong spectral property of A relative to the supergraph H. The
/// classical SSP is H = pattern_of(A).
inline SspVerdict has_ssp(const SymMatrix& a, const Graph& h, const Tolerances& tol = {}) {
  const SspConstraintOperator op = build_ssp_operator(a, h);
  SspVerdict v;

  if (op.free_pairs.empty()) {  // no admissible X besides zero: vacuous
    v.has_ssp = true;
    v.margin = std::numeric_limits<double>::infinity();
    return v;
  }

  const NullspaceResult ns = nullspace(op.matrix, tol.rank_tol);
  const int cols = op.matrix.cols();
  v.kernel_dim = cols - ns.rank;
  v.has_ssp = v.kernel_dim == 0;
  v.margin = ns.singular_values.back();
  const double cutoff = tol.rank_tol * ns.singular_values.front();
  v.marginal = cutoff > 0.0 && v.margin <= 10.0 * cutoff && v.margin >= cutoff / 10.0;

  if (!v.has_ssp) {
    SymMatrix x(a.order());
    for (std::size_t c = 0; c < op.free_pairs.size(); ++c)
      x.set(op.free_pairs[c].first, op.free_pairs[c].second, ns.basis(static_cast<int>(c), 0));
    const double top = x.max_abs();
    if (top > 0.0) x = (1.0 / top) * x;
    // canonical sign: first nonzero entry positive
    for (int i = 0; i < x.order() * x.order(); ++i) {
      const int p = i / x.order(), q = i % x.order();
      if (p > q || x(p, q) == 0.0) continue;
      if (x(p, q) < 0.0) x = -1.0 * x;
      break;
    }
    v.witness = std::move(x);
  }
  return v;
}

/// Check that X certifies failure of the SSP of A relative to H: zero
/// diagonal, zero on the edges of H, and commuting with A. Entry checks use
/// zero_tol; the commutator residual is allowed 100 * rank_tol relative to
/// the scales of A and X, matching the accuracy of kernel vectors extracted
/// at the rank cutoff. X = 0 passes vacuously.
inline bool verify_witness(const SymMatrix& a, const Graph& h, const SymMatrix& x,
                           const Tolerances& tol = {}) {
  if (a.order() != x.order() || a.order() != h.order()) return false;
  for (int i = 0; i < x.order(); ++i)
    if (std::abs(x(i, i)) > tol.zero_tol) return false;
  for (const auto& [i, j] : h.edges())
    if (std::abs(x(i, j)) > tol.zero_tol) return false;

  const Matrix c = commutator(a, x);
  const double bound = 100.0 * tol.rank_tol * (1.0 + a.frobenius()) * (1.0 + x.frobenius());
  return c.frobenius() <= bound;
}

}  // namespace iepg
