#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "iepg/symmat.hpp"

namespace iepg {

/// Eigenvalues ascending, eigenvectors as the matching columns of an
/// orthogonal matrix.
struct EighResult {
  std::vector<double> values;
  Matrix vectors;

  std::vector<double> vector(int k) const { return vectors.col(k); }
};

/// Cyclic Jacobi diagonalization. Sweeps rotate away every off-diagonal pair
/// in lexicographic order until the off-diagonal Frobenius mass is at
/// round-off level; quadratic convergence makes ~10 sweeps plenty at the
/// orders handled here. Deterministic: fixed sweep order, eigenvalues sorted
/// ascending, each eigenvector's largest-magnitude entry made positive.
inline EighResult eigh(const SymMatrix& sym) {
  const int n = sym.order();
  Matrix a = sym.dense();
  Matrix v = Matrix::identity(n);

  const double total = sym.frobenius();
  const double stop = total * 1e-15;

  auto off_norm = [&]() {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
    return std::sqrt(2.0 * s);
  };

  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps && off_norm() > stop; ++sweep) {
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }

  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int i, int j) { return a(i, i) < a(j, j); });

  EighResult out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (int k = 0; k < n; ++k) {
    out.values[k] = a(idx[k], idx[k]);
    int top = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(v(i, idx[k])) > std::abs(v(top, idx[k]))) top = i;
    const double flip = v(top, idx[k]) < 0.0 ? -1.0 : 1.0;
    for (int i = 0; i < n; ++i) out.vectors(i, k) = flip * v(i, idx[k]);
  }
  return out;
}

inline std::vector<double> eigvals(const SymMatrix& a) { return eigh(a).values; }

/// Rank, orthonormal kernel basis and singular values of a rectangular M,
/// all read off one symmetric eigendecomposition of the embedding
/// [[0, M], [M^T, 0]], whose spectrum is {+-sigma_i} padded with zeros.
/// Working on the embedding instead of M^T M keeps small singular values at
/// round-off accuracy, which the relative rank threshold needs.
struct NullspaceResult {
  int rank = 0;
  Matrix basis;                       // cols(M) x nullity, orthonormal columns
  std::vector<double> singular_values;  // descending, length min(rows, cols)
};

inline NullspaceResult nullspace(const Matrix& m, double rank_tol) {
  const int rows = m.rows(), cols = m.cols();
  if (cols == 0) return NullspaceResult{0, Matrix(0, 0), {}};

  SymMatrix embed(rows + cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) embed.set(i, rows + j, m(i, j));
  const EighResult eg = eigh(embed);

  const int nsv = std::min(rows, cols);
  std::vector<double> svals(nsv);
  for (int k = 0; k < nsv; ++k)
    svals[k] = std::max(0.0, eg.values[rows + cols - 1 - k]);  // top of the spectrum, descending

  const double sigma_max = svals.empty() ? 0.0 : svals.front();
  const double cutoff = rank_tol * sigma_max;
  int rank = 0;
  while (rank < nsv && svals[rank] > cutoff) ++rank;
  const int nullity = cols - rank;

  // The lower components of every small-eigenvalue eigenvector lie in (a
  // perturbation of) ker M; a pivoted Gram-Schmidt pass distills an
  // orthonormal basis of the right dimension out of them.
  std::vector<std::vector<double>> cand;
  for (int k = 0; k < rows + cols; ++k) {
    if (std::abs(eg.values[k]) > cutoff) continue;
    std::vector<double> w(cols);
    for (int j = 0; j < cols; ++j) w[j] = eg.vectors(rows + j, k);
    cand.push_back(std::move(w));
  }

  Matrix basis(cols, nullity);
  std::vector<std::vector<double>> kept;
  for (int t = 0; t < nullity; ++t) {
    int best = -1;
    double best_norm = -1.0;
    std::vector<double> best_vec;
    for (std::size_t c = 0; c < cand.size(); ++c) {
      std::vector<double> w = cand[c];
      for (const auto& u : kept) {
        double dot = 0.0;
        for (int j = 0; j < cols; ++j) dot += u[j] * w[j];
        for (int j = 0; j < cols; ++j) w[j] -= dot * u[j];
      }
      double norm = 0.0;
      for (double x : w) norm += x * x;
      norm = std::sqrt(norm);
      if (norm > best_norm) {
        best_norm = norm;
        best = static_cast<int>(c);
        best_vec = std::move(w);
      }
    }
    if (best < 0 || best_norm <= 0.0)
      throw std::runtime_error("nullspace: kernel basis extraction degenerated");
    for (double& x : best_vec) x /= best_norm;
    for (int j = 0; j < cols; ++j) basis(j, t) = best_vec[j];
    kept.push_back(std::move(best_vec));
    cand.erase(cand.begin() + best);
  }

  return NullspaceResult{rank, std::move(basis), std::move(svals)};
}

}  // namespace iepg
