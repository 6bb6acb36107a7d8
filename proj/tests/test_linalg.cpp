#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "iepg/eigh.hpp"
#include "iepg/graph.hpp"
#include "iepg/rng.hpp"
#include "iepg/spectrum.hpp"
#include "iepg/symmat.hpp"

using namespace iepg;

namespace {

SymMatrix random_sym(Rng& rng, int n, double scale = 1.0) {
  SymMatrix a(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) a.set(i, j, scale * rng.uniform(-1.0, 1.0));
  return a;
}

double reconstruction_error(const SymMatrix& a, const EighResult& eg) {
  const int n = a.order();
  double err = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += eg.vectors(i, k) * eg.values[k] * eg.vectors(j, k);
      err += (s - a(i, j)) * (s - a(i, j));
    }
  return std::sqrt(err);
}

double orthogonality_error(const Matrix& v) {
  double err = 0.0;
  for (int i = 0; i < v.cols(); ++i)
    for (int j = 0; j < v.cols(); ++j) {
      double s = 0.0;
      for (int k = 0; k < v.rows(); ++k) s += v(k, i) * v(k, j);
      err = std::max(err, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  return err;
}

}  // namespace

TEST_CASE("symmetric storage and element operations") {
  SymMatrix a(3);
  a.set(0, 1, 2.0);
  CHECK(a(1, 0) == 2.0);
  a.add(2, 1, -1.5);
  CHECK(a(1, 2) == -1.5);
  CHECK(a.trace() == 0.0);

  const SymMatrix d = SymMatrix::diagonal({1.0, 2.0, 3.0});
  CHECK(d.trace() == 6.0);
  const SymMatrix sub = principal_submatrix(d, 1);
  CHECK(sub.order() == 2);
  CHECK(sub(0, 0) == 1.0);
  CHECK(sub(1, 1) == 3.0);

  const SymMatrix s = direct_sum(d, SymMatrix::scaled_identity(2, 5.0));
  CHECK(s.order() == 5);
  CHECK(s(3, 3) == 5.0);
  CHECK(s(0, 3) == 0.0);

  const SymMatrix h = hadamard(d, d);
  CHECK(h(2, 2) == 9.0);
}

TEST_CASE("permutation conjugation") {
  Rng rng(3);
  const SymMatrix a = random_sym(rng, 5);
  const std::vector<int> perm{2, 0, 4, 1, 3};
  std::vector<int> inv(5);
  for (int i = 0; i < 5; ++i) inv[perm[i]] = i;
  const SymMatrix b = permute(permute(a, perm), inv);
  CHECK((b - a).max_abs() == 0.0);
  const SymMatrix p = permute(a, perm);
  CHECK(p(perm[1], perm[3]) == a(1, 3));
}

TEST_CASE("commutator is skew and vanishes against the identity") {
  Rng rng(5);
  const SymMatrix a = random_sym(rng, 6);
  const Matrix z = commutator(a, SymMatrix::scaled_identity(6, 1.0));
  CHECK(z.frobenius() == 0.0);

  const SymMatrix b = random_sym(rng, 6);
  const Matrix c = commutator(a, b);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) CHECK(c(i, j) == Catch::Approx(-c(j, i)).margin(1e-14));
}

TEST_CASE("eigh on closed-form cases") {
  SymMatrix a(2);
  a.set(0, 0, 1.0);
  a.set(0, 1, 1.0);
  a.set(1, 1, 1.0);
  const EighResult eg = eigh(a);
  CHECK(eg.values[0] == Catch::Approx(0.0).margin(1e-13));
  CHECK(eg.values[1] == Catch::Approx(2.0).margin(1e-13));
  // eigenvector of the double eigenvalue 2 is (1,1)/sqrt(2), positive by convention
  CHECK(eg.vectors(0, 1) == Catch::Approx(1.0 / std::sqrt(2.0)));
  CHECK(eg.vectors(1, 1) == Catch::Approx(1.0 / std::sqrt(2.0)));

  const EighResult one = eigh(SymMatrix::diagonal({7.0}));
  CHECK(one.values == std::vector<double>{7.0});
  CHECK(one.vectors(0, 0) == 1.0);
}

TEST_CASE("eigh matches the characteristic polynomial of a tridiagonal") {
  SymMatrix a(3);
  a.set(0, 0, 2.0);
  a.set(1, 1, 3.0);
  a.set(2, 2, 4.0);
  a.set(0, 1, 1.0);
  a.set(1, 2, 1.0);
  const auto v = eigvals(a);
  // elementary symmetric functions: trace, sum of principal 2-minors, det
  CHECK(v[0] + v[1] + v[2] == Catch::Approx(9.0).margin(1e-12));
  CHECK(v[0] * v[1] + v[0] * v[2] + v[1] * v[2] == Catch::Approx(24.0).margin(1e-11));
  CHECK(v[0] * v[1] * v[2] == Catch::Approx(18.0).margin(1e-11));
}

TEST_CASE("eigh handles repeated eigenvalues") {
  // I + outer(v, v) has spectrum {1, 1, 1, 1 + |v|^2}
  const std::vector<double> v{0.5, -1.0, 2.0, 1.5};
  double nv = 0.0;
  for (double x : v) nv += x * x;
  SymMatrix a(4);
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) a.set(i, j, (i == j ? 1.0 : 0.0) + v[i] * v[j]);
  const auto ev = eigvals(a);
  for (int k = 0; k < 3; ++k) CHECK(ev[k] == Catch::Approx(1.0).margin(1e-12));
  CHECK(ev[3] == Catch::Approx(1.0 + nv).margin(1e-12));
}

TEST_CASE("eigh decomposition quality on random matrices") {
  Rng rng(17);
  for (int t = 0; t < 25; ++t) {
    const int n = rng.uniform_int(1, 12);
    const SymMatrix a = random_sym(rng, n, rng.uniform(0.5, 10.0));
    const EighResult eg = eigh(a);
    CHECK(std::is_sorted(eg.values.begin(), eg.values.end()));
    CHECK(reconstruction_error(a, eg) <= 1e-12 * (1.0 + a.frobenius()));
    CHECK(orthogonality_error(eg.vectors) < 1e-13);
    double tr = 0.0;
    for (double x : eg.values) tr += x;
    CHECK(tr == Catch::Approx(a.trace()).margin(1e-10 * (1.0 + a.frobenius())));
  }
}

TEST_CASE("eigh is deterministic") {
  Rng rng(19);
  const SymMatrix a = random_sym(rng, 8);
  const EighResult e1 = eigh(a), e2 = eigh(a);
  CHECK(e1.values == e2.values);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) CHECK(e1.vectors(i, j) == e2.vectors(i, j));
}

TEST_CASE("nullspace of simple matrices") {
  Matrix m(2, 2);
  m(0, 0) = 1.0;
  const NullspaceResult ns = nullspace(m, 1e-9);
  CHECK(ns.rank == 1);
  REQUIRE(ns.basis.cols() == 1);
  CHECK(std::abs(ns.basis(0, 0)) < 1e-12);
  CHECK(std::abs(ns.basis(1, 0)) == Catch::Approx(1.0));
  CHECK(ns.singular_values[0] == Catch::Approx(1.0));
  CHECK(ns.singular_values[1] == Catch::Approx(0.0).margin(1e-13));

  const NullspaceResult zero = nullspace(Matrix(2, 3), 1e-9);
  CHECK(zero.rank == 0);
  CHECK(zero.basis.cols() == 3);
  CHECK(orthogonality_error(zero.basis) < 1e-12);
}

TEST_CASE("nullspace recovers planted ranks") {
  Rng rng(29);
  for (int t = 0; t < 25; ++t) {
    const int rows = rng.uniform_int(1, 10), cols = rng.uniform_int(1, 10);
    const int r = rng.uniform_int(0, std::min(rows, cols));
    // generic rank-r product
    Matrix left(rows, r), right(r, cols);
    for (int i = 0; i < rows; ++i)
      for (int k = 0; k < r; ++k) left(i, k) = rng.uniform(-1.0, 1.0);
    for (int k = 0; k < r; ++k)
      for (int j = 0; j < cols; ++j) right(k, j) = rng.uniform(-1.0, 1.0);
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) {
        double s = 0.0;
        for (int k = 0; k < r; ++k) s += left(i, k) * right(k, j);
        m(i, j) = s;
      }

    const NullspaceResult ns = nullspace(m, 1e-9);
    CHECK(ns.rank == r);
    CHECK(ns.basis.cols() == cols - r);
    CHECK(orthogonality_error(ns.basis) < 1e-10);
    const double sigma_max = ns.singular_values.empty() ? 0.0 : ns.singular_values[0];
    for (int c = 0; c < ns.basis.cols(); ++c) {
      double worst = 0.0;
      for (int i = 0; i < rows; ++i) {
        double s = 0.0;
        for (int j = 0; j < cols; ++j) s += m(i, j) * ns.basis(j, c);
        worst = std::max(worst, std::abs(s));
      }
      CHECK(worst <= 10.0 * 1e-9 * (1.0 + sigma_max));
    }
  }
}

TEST_CASE("spectrum grouping") {
  const Spectrum s = spectrum(SymMatrix::diagonal({1.0, 1.0, 2.0}));
  CHECK(s.values == std::vector<double>{1.0, 2.0});
  CHECK(s.multiplicities == std::vector<int>{2, 1});
  CHECK(s.total() == 3);

  const Spectrum tight = group_values({0.0, 1e-12, 5.0}, 1e-9);
  CHECK(tight.multiplicities == std::vector<int>{2, 1});
  CHECK(tight.values[0] == Catch::Approx(5e-13).margin(1e-12));

  Rng rng(37);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> vals;
    for (int i = 0; i < 12; ++i) vals.push_back(rng.uniform(-5.0, 5.0));
    const Spectrum g = group_values(vals, 1e-6);
    for (int i = 0; i + 1 < g.groups(); ++i) CHECK(g.values[i + 1] - g.values[i] > 1e-6);
    CHECK(g.total() == 12);
  }
}

TEST_CASE("spectrum of a direct sum is the union") {
  Rng rng(43);
  const SymMatrix a = random_sym(rng, 4), b = random_sym(rng, 5);
  auto both = eigvals(a);
  const auto eb = eigvals(b);
  both.insert(both.end(), eb.begin(), eb.end());
  CHECK(multiset_distance(eigvals(direct_sum(a, b)), both) < 1e-12);
}

TEST_CASE("multiset distance") {
  CHECK(multiset_distance({1.0, 2.0}, {2.0, 1.0}) == 0.0);
  CHECK(multiset_distance({1.0}, {1.5}) == 0.5);
  CHECK(multiset_distance({0.0, 10.0}, {1.0, 9.0}) == 1.0);
  CHECK_THROWS_AS(multiset_distance({1.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("pattern membership") {
  const Graph g = star(5);
  const SymMatrix a = adjacency_matrix(g);
  CHECK(pattern_of(a, 1e-8) == g);
  CHECK(in_pattern_strict(a, g, 1e-8));
  CHECK(in_pattern_closed(a, g, 1e-8));
  CHECK_FALSE(in_pattern_strict(a, complete(5), 1e-8));
  CHECK(in_pattern_closed(a, complete(5), 1e-8));

  const SymMatrix d = SymMatrix::diagonal({1.0, 2.0, 3.0});
  CHECK(pattern_of(d, 1e-8).size() == 0);
  CHECK(in_pattern_closed(d, Graph(3, {}), 1e-8));
  CHECK(in_pattern_strict(d, Graph(3, {}), 1e-8));

  const SymMatrix z(4);
  CHECK(in_pattern_closed(z, path(4), 1e-8));
  CHECK_FALSE(in_pattern_strict(z, path(4), 1e-8));
}
