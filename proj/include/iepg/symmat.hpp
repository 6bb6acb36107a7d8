#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "iepg/graph.hpp"

namespace iepg {

/// Dense rectangular matrix, row-major. Only the handful of operations the
/// solvers need.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, fill) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("Matrix: negative dimension");
  }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

  std::vector<double> col(int j) const {
    std::vector<double> v(rows_);
    for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  double frobenius() const {
    double s = 0.0;
    for (double x : a_) s += x * x;
    return std::sqrt(s);
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

/// Real symmetric matrix with only the upper triangle stored, so symmetry
/// holds by construction.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0) {
    if (n < 0) throw std::invalid_argument("SymMatrix: negative order");
  }

  static SymMatrix diagonal(const std::vector<double>& d) {
    SymMatrix m(static_cast<int>(d.size()));
    for (int i = 0; i < m.order(); ++i) m.set(i, i, d[i]);
    return m;
  }

  static SymMatrix scaled_identity(int n, double c) {
    SymMatrix m(n);
    for (int i = 0; i < n; ++i) m.set(i, i, c);
    return m;
  }

  int order() const { return n_; }

  double operator()(int i, int j) const { return a_[index(i, j)]; }
  void set(int i, int j, double v) { a_[index(i, j)] = v; }
  void add(int i, int j, double v) { a_[index(i, j)] += v; }

  double frobenius() const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = i; j < n_; ++j) {
        const double x = (*this)(i, j);
        s += (i == j) ? x * x : 2.0 * x * x;
      }
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (double x : a_) m = std::max(m, std::abs(x));
    return m;
  }

  double trace() const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) s += (*this)(i, i);
    return s;
  }

  std::vector<double> diagonal_entries() const {
    std::vector<double> d(n_);
    for (int i = 0; i < n_; ++i) d[i] = (*this)(i, i);
    return d;
  }

  Matrix dense() const {
    Matrix m(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) m(i, j) = (*this)(i, j);
    return m;
  }

  /// A * x for a length-n vector.
  std::vector<double> apply(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("SymMatrix::apply: size mismatch");
    std::vector<double> y(n_, 0.0);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
  }

 private:
  std::size_t index(int i, int j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) throw std::out_of_range("SymMatrix: index out of range");
    if (i > j) std::swap(i, j);
    return static_cast<std::size_t>(i) * n_ - static_cast<std::size_t>(i) * (i - 1) / 2 + (j - i);
  }

  int n_ = 0;
  std::vector<double> a_;
};

inline SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
  if (a.order() != b.order()) throw std::invalid_argument("SymMatrix +: order mismatch");
  SymMatrix c(a.order());
  for (int i = 0; i < a.order(); ++i)
    for (int j = i; j < a.order(); ++j) c.set(i, j, a(i, j) + b(i, j));
  return c;
}

inline SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
  if (a.order() != b.order()) throw std::invalid_argument("SymMatrix -: order mismatch");
  SymMatrix c(a.order());
  for (int i = 0; i < a.order(); ++i)
    for (int j = i; j < a.order(); ++j) c.set(i, j, a(i, j) - b(i, j));
  return c;
}

inline SymMatrix operator*(double c, const SymMatrix& a) {
  SymMatrix b(a.order());
  for (int i = 0; i < a.order(); ++i)
    for (int j = i; j < a.order(); ++j) b.set(i, j, c * a(i, j));
  return b;
}

/// Entrywise (Hadamard) product.
inline SymMatrix hadamard(const SymMatrix& a, const SymMatrix& b) {
  if (a.order() != b.order()) throw std::invalid_argument("hadamard: order mismatch");
  SymMatrix c(a.order());
  for (int i = 0; i < a.order(); ++i)
    for (int j = i; j < a.order(); ++j) c.set(i, j, a(i, j) * b(i, j));
  return c;
}

inline SymMatrix direct_sum(const SymMatrix& a, const SymMatrix& b) {
  SymMatrix c(a.order() + b.order());
  for (int i = 0; i < a.order(); ++i)
    for (int j = i; j < a.order(); ++j) c.set(i, j, a(i, j));
  for (int i = 0; i < b.order(); ++i)
    for (int j = i; j < b.order(); ++j) c.set(a.order() + i, a.order() + j, b(i, j));
  return c;
}

/// A with row and column v deleted.
inline SymMatrix principal_submatrix(const SymMatrix& a, int v) {
  if (v < 0 || v >= a.order()) throw std::invalid_argument("principal_submatrix: vertex out of range");
  SymMatrix c(a.order() - 1);
  for (int i = 0, ci = 0; i < a.order(); ++i) {
    if (i == v) continue;
    for (int j = i, cj = ci; j < a.order(); ++j) {
      if (j == v) continue;
      c.set(ci, cj, a(i, j));
      ++cj;
    }
    ++ci;
  }
  return c;
}

/// AB - BA. Skew-symmetric for symmetric A, B, so returned as a dense matrix.
inline Matrix commutator(const SymMatrix& a, const SymMatrix& b) {
  if (a.order() != b.order()) throw std::invalid_argument("commutator: order mismatch");
  const int n = a.order();
  Matrix c(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += a(i, k) * b(k, j) - b(i, k) * a(k, j);
      c(i, j) = s;
    }
  return c;
}

/// Symmetric conjugation P A P^T for the permutation sending old index i to
/// new index perm[i].
inline SymMatrix permute(const SymMatrix& a, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != a.order()) throw std::invalid_argument("permute: size mismatch");
  SymMatrix c(a.order());
  for (int i = 0; i < a.order(); ++i)
    for (int j = i; j < a.order(); ++j) c.set(perm[i], perm[j], a(i, j));
  return c;
}

/// 0/1 adjacency matrix of a graph.
inline SymMatrix adjacency_matrix(const Graph& g) {
  SymMatrix a(g.order());
  for (const auto& [i, j] : g.edges()) a.set(i, j, 1.0);
  return a;
}

/// Graph whose edges are the off-diagonal entries of A larger than zero_tol
/// in magnitude.
inline Graph pattern_of(const SymMatrix& a, double zero_tol) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < a.order(); ++i)
    for (int j = i + 1; j < a.order(); ++j)
      if (std::abs(a(i, j)) > zero_tol) e.emplace_back(i, j);
  return Graph(a.order(), std::move(e));
}

/// A lies in S(G): off-diagonal entries are > zero_tol in magnitude exactly
/// on the edges of G.
inline bool in_pattern_strict(const SymMatrix& a, const Graph& g, double zero_tol) {
  if (a.order() != g.order()) return false;
  for (int i = 0; i < a.order(); ++i)
    for (int j = i + 1; j < a.order(); ++j) {
      const bool big = std::abs(a(i, j)) > zero_tol;
      if (big != g.adjacent(i, j)) return false;
    }
  return true;
}

/// A lies in the closure S^cl(G): off-edge entries vanish, edge entries are
/// unconstrained.
inline bool in_pattern_closed(const SymMatrix& a, const Graph& g, double zero_tol) {
  if (a.order() != g.order()) return false;
  for (int i = 0; i < a.order(); ++i)
    for (int j = i + 1; j < a.order(); ++j)
      if (!g.adjacent(i, j) && std::abs(a(i, j)) > zero_tol) return false;
  return true;
}

}  // namespace iepg
