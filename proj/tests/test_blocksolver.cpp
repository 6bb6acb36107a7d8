#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "iepg/blocks.hpp"
#include "iepg/blocksolver.hpp"
#include "iepg/errors.hpp"
#include "iepg/graph.hpp"
#include "iepg/multiplicity.hpp"
#include "iepg/rng.hpp"
#include "iepg/spectrum.hpp"

using namespace iepg;

namespace {

bool entries_equal(const SymMatrix& a, const SymMatrix& b) {
  if (a.order() != b.order()) return false;
  for (int i = 0; i < a.order(); ++i)
    for (int j = i; j < a.order(); ++j)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

/// Count partitions by brute force over descending part choices.
int partition_count(int n, int max_part) {
  if (n == 0) return 1;
  int total = 0;
  for (int first = std::min(n, max_part); first >= 1; --first)
    total += partition_count(n - first, first);
  return total;
}

Graph g117() {
  return Graph(6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}, {1, 2}, {3, 4}});
}

Graph g150() { return blowup_graph(blowup(path(4), {1, 2, 2, 1})); }

/// Full consistency of a witness against the reduced base and the target.
void check_witness(const Graph& g, const MultiplicityList& target,
                   const FeasibilityWitness& w) {
  const BlowupSpec base = realization_base(g);
  const auto dec = block_decomposition(base.base);
  REQUIRE(w.block >= 0);
  REQUIRE(w.block < static_cast<int>(dec.blocks.size()));
  REQUIRE(w.refinement.size() == dec.blocks.size());
  const int m_db = static_cast<int>(dec.blocks[w.block].size()) - 1;
  REQUIRE(w.k >= 1);
  REQUIRE(w.k <= m_db);

  MultiplicityList flat{w.k};
  for (int i = 0; i < static_cast<int>(dec.blocks.size()); ++i) {
    int sum = 0;
    for (int part : w.refinement[i]) {
      REQUIRE(part >= 1);
      sum += part;
    }
    const int expect = static_cast<int>(dec.blocks[i].size()) - 1 +
                       (i == w.block ? 1 - w.k : 0);
    REQUIRE(sum == expect);
    flat.insert(flat.end(), w.refinement[i].begin(), w.refinement[i].end());
  }
  REQUIRE(covers(target, flat));

  // the part assignment is an injection into the target and never over-assigns
  REQUIRE(w.part_targets.size() == flat.size());
  std::set<int> used;
  for (std::size_t f = 0; f < flat.size(); ++f) {
    const int t = w.part_targets[f];
    REQUIRE(t >= 0);
    REQUIRE(t < static_cast<int>(target.size()));
    REQUIRE(used.insert(t).second);
    REQUIRE(target[t] >= flat[f]);
  }
}

void check_certificate(const RealizationCertificate& cert, const Graph& g,
                       std::vector<double> sigma) {
  std::sort(sigma.begin(), sigma.end());
  double scale = 1.0;
  for (double v : sigma) scale = std::max(scale, 1.0 + std::abs(v));
  REQUIRE(cert.graph == g);
  REQUIRE(cert.target == sigma);
  REQUIRE(cert.matrix.order() == g.order());
  CHECK(cert.pattern_ok);
  CHECK(in_pattern_strict(cert.matrix, g, Tolerances{}.zero_tol));
  CHECK(cert.spectral_deviation <= 1e-6 * scale);
  CHECK(multiset_distance(eigvals(cert.matrix), sigma) <= 1e-6 * scale);
  REQUIRE_FALSE(cert.stages.empty());
}

}  // namespace

TEST_CASE("partition lists are canonical and complete", "[multiplicity]") {
  const int expected[] = {1, 2, 3, 5, 7, 11, 15, 22};
  for (int n = 1; n <= 8; ++n) {
    const auto parts = partitions_of(n);
    REQUIRE(static_cast<int>(parts.size()) == expected[n - 1]);
    REQUIRE(static_cast<int>(parts.size()) == partition_count(n, n));
    REQUIRE(parts.front() == MultiplicityList{n});
    REQUIRE(parts.back() == MultiplicityList(n, 1));
    for (const auto& p : parts) {
      int sum = 0;
      for (std::size_t i = 0; i < p.size(); ++i) {
        REQUIRE(p[i] >= 1);
        if (i > 0) REQUIRE(p[i] <= p[i - 1]);
        sum += p[i];
      }
      REQUIRE(sum == n);
    }
    // reverse lexicographic: each partition precedes the next
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) REQUIRE(parts[i] > parts[i + 1]);
  }
  REQUIRE(partitions_of(0) == std::vector<MultiplicityList>{{}});
}

TEST_CASE("refinement enumeration runs the odometer with the last slot fastest",
          "[multiplicity]") {
  const auto en = enumerate_refinements({2, 2});
  REQUIRE_FALSE(en.truncated);
  REQUIRE(en.items.size() == 4);
  REQUIRE(en.items[0] == Refinement{{2}, {2}});
  REQUIRE(en.items[1] == Refinement{{2}, {1, 1}});
  REQUIRE(en.items[2] == Refinement{{1, 1}, {2}});
  REQUIRE(en.items[3] == Refinement{{1, 1}, {1, 1}});
  for (const auto& r : en.items) REQUIRE(is_refinement(r, {2, 2}));

  const auto capped = enumerate_refinements({2, 2}, 3);
  REQUIRE(capped.truncated);
  REQUIRE(capped.items.size() == 3);

  const auto empty = enumerate_refinements({});
  REQUIRE_FALSE(empty.truncated);
  REQUIRE(empty.items.size() == 1);
  REQUIRE(empty.items[0].empty());

  const auto big = enumerate_refinements({4, 3, 2});
  REQUIRE(big.items.size() == 5u * 3u * 2u);
  REQUIRE(flatten(big.items.back()) == MultiplicityList(9, 1));
}

TEST_CASE("cover order on multiplicity lists", "[multiplicity]") {
  CHECK(covers({3, 1, 1, 1, 1}, {2, 1, 1, 1}));
  CHECK_FALSE(covers({2, 2}, {3}));
  CHECK_FALSE(covers({3}, {2, 2}));
  CHECK(covers({2, 2}, {2, 2}));
  CHECK(covers({5, 1}, {1, 1}));

  Rng rng(2001);
  int transitive_premises = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto draw = [&rng]() {
      MultiplicityList m(static_cast<std::size_t>(rng.uniform_int(1, 5)));
      for (int& v : m) v = rng.uniform_int(1, 6);
      return m;
    };
    const MultiplicityList a = draw(), b = draw(), c = draw();
    CHECK(covers(a, a));
    if (covers(a, b)) CHECK(a.size() >= b.size());
    if (covers(a, b) && covers(b, c)) {
      ++transitive_premises;
      CHECK(covers(a, c));
    }
  }
  REQUIRE(transitive_premises >= 10);
}

TEST_CASE("corona of a triangle admits the near-constant multiplicity list",
          "[blocksolver]") {
  const Graph g = corona_complete(3);
  const auto fs = feasible_multiplicity(g, {2, 1, 1, 1, 1});
  REQUIRE(fs.witness.has_value());
  REQUIRE_FALSE(fs.budget_exhausted);
  check_witness(g, {2, 1, 1, 1, 1}, *fs.witness);
  CHECK(fs.witness->k == 2);
  // the triangle block hosts the doubled eigenvalue
  const auto dec = block_decomposition(realization_base(g).base);
  CHECK(dec.blocks[static_cast<std::size_t>(fs.witness->block)].size() == 3);
}

TEST_CASE("corona of K_n admits {n-1, 1, ...} for n = 3..6", "[blocksolver]") {
  for (int n = 3; n <= 6; ++n) {
    const Graph g = corona_complete(n);
    MultiplicityList target{n - 1};
    target.insert(target.end(), static_cast<std::size_t>(n + 1), 1);
    const auto fs = feasible_multiplicity(g, target);
    REQUIRE(fs.witness.has_value());
    check_witness(g, target, *fs.witness);
    CHECK(fs.witness->k == n - 1);
  }
}

TEST_CASE("stars only admit the all-ones multiplicity list", "[blocksolver]") {
  for (int n = 3; n <= 6; ++n) {
    const Graph g = star(n);
    const auto ones = feasible_multiplicity(g, MultiplicityList(static_cast<std::size_t>(n), 1));
    REQUIRE(ones.witness.has_value());
    check_witness(g, MultiplicityList(static_cast<std::size_t>(n), 1), *ones.witness);

    MultiplicityList doubled{2};
    doubled.insert(doubled.end(), static_cast<std::size_t>(n - 2), 1);
    const auto fs = feasible_multiplicity(g, doubled);
    CHECK_FALSE(fs.witness.has_value());
    CHECK_FALSE(fs.budget_exhausted);
  }
}

TEST_CASE("a clique path can refuse a multiplicity list outright", "[blocksolver]") {
  const Graph g = clique_path({2, 3, 3, 2});
  REQUIRE(g.order() == 7);
  const auto fs = feasible_multiplicity(g, {3, 1, 1, 1, 1});
  CHECK_FALSE(fs.witness.has_value());
  CHECK_FALSE(fs.budget_exhausted);  // a definite no, not a budget cutoff

  const auto ok = feasible_multiplicity(g, {2, 2, 1, 1, 1});
  REQUIRE(ok.witness.has_value());
  check_witness(g, {2, 2, 1, 1, 1}, *ok.witness);
}

TEST_CASE("witness search validates its input", "[blocksolver]") {
  CHECK_THROWS_AS(feasible_multiplicity(path(3), {2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(feasible_multiplicity(path(3), {}), std::invalid_argument);
  CHECK_THROWS_AS(feasible_multiplicity(path(3), {2, 0, 1}), std::invalid_argument);
  const Graph c4(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  CHECK_THROWS_AS(feasible_multiplicity(c4, {1, 1, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(feasible_multiplicity(disjoint_union(path(2), path(2)),
                                        {1, 1, 1, 1}),
                  std::invalid_argument);
  const auto single = feasible_multiplicity(complete(1), {1});
  REQUIRE(single.witness.has_value());
}

TEST_CASE("corona realization carries a doubled eigenvalue", "[blocksolver]") {
  const Graph g = corona_complete(3);
  const std::vector<double> sigma{5, 5, 1, 2, 3, 4};
  Rng rng(7);
  const auto cert = realize_block_graph(g, sigma, rng);
  check_certificate(cert, g, sigma);
  REQUIRE(cert.witness.has_value());
  CHECK(cert.witness->k == 2);
  REQUIRE(cert.reduced_ssp.has_value());
  CHECK(cert.reduced_ssp->has_ssp);
}

TEST_CASE("clique path realization places the doubled value on the middle block",
          "[blocksolver]") {
  const Graph g = clique_path({2, 3, 2});
  const std::vector<double> sigma{1, 1, 2, 3, 4};
  Rng rng(11);
  const auto cert = realize_block_graph(g, sigma, rng);
  check_certificate(cert, g, sigma);
  REQUIRE(cert.witness.has_value());
  CHECK(cert.witness->k == 2);
  REQUIRE(cert.reduced_ssp.has_value());
  CHECK(cert.reduced_ssp->has_ssp);
}

TEST_CASE("complete graph with two eigenvalue groups skips chain and fill",
          "[blocksolver]") {
  const Graph g = complete(4);
  const std::vector<double> sigma{7, 7, 7, 9};
  Rng rng(3);
  const auto cert = realize_block_graph(g, sigma, rng);
  check_certificate(cert, g, sigma);
  bool saw_empty_chain = false, saw_fill_skip = false;
  for (const auto& s : cert.stages) {
    if (s.find("chain: 0") != std::string::npos) saw_empty_chain = true;
    if (s.find("already covers") != std::string::npos) saw_fill_skip = true;
  }
  CHECK(saw_empty_chain);
  CHECK(saw_fill_skip);
}

TEST_CASE("complete graph with three groups restores the missing block edges",
          "[blocksolver]") {
  const Graph g = complete(4);
  const std::vector<double> sigma{1, 1, 2, 3};
  Rng rng(19);
  const auto cert = realize_block_graph(g, sigma, rng);
  check_certificate(cert, g, sigma);
  bool saw_fill = false;
  for (const auto& s : cert.stages)
    if (s.find("edges restored") != std::string::npos) saw_fill = true;
  CHECK(saw_fill);
  REQUIRE(cert.reduced_ssp.has_value());
  CHECK(cert.reduced_ssp->has_ssp);
}

TEST_CASE("lollipop block realization expands its clique back out", "[blocksolver]") {
  const Graph g = lollipop(4, 1);
  const std::vector<double> sigma{1, 1, 2, 3, 4};
  Rng rng(23);
  const auto cert = realize_block_graph(g, sigma, rng);
  check_certificate(cert, g, sigma);
  bool saw_blowup = false;
  for (const auto& s : cert.stages)
    if (s.find("blowup: 2") != std::string::npos) saw_blowup = true;
  CHECK(saw_blowup);
}

TEST_CASE("pipeline refuses spectra without a witness", "[blocksolver]") {
  Rng rng(1);
  CHECK_THROWS_AS(realize_block_graph(complete(2), {3, 3}, rng), NotCertifiedError);
  CHECK_THROWS_AS(realize_block_graph(star(4), {0, 0, 1, 2}, rng), NotCertifiedError);
  CHECK_THROWS_AS(
      realize_block_graph(clique_path({2, 3, 3, 2}), {0, 0, 0, 1, 2, 3, 4}, rng),
      NotCertifiedError);
}

TEST_CASE("block graph realization is deterministic per seed", "[blocksolver]") {
  const Graph g = corona_complete(3);
  const std::vector<double> sigma{5, 5, 1, 2, 3, 4};
  Rng r1(42), r2(42);
  const auto c1 = realize_block_graph(g, sigma, r1);
  const auto c2 = realize_block_graph(g, sigma, r2);
  CHECK(entries_equal(c1.matrix, c2.matrix));
  Rng r3(43);
  const auto c3 = realize_block_graph(g, sigma, r3);
  CHECK_FALSE(entries_equal(c1.matrix, c3.matrix));
}

TEST_CASE("pendant-clique blowup spec reproduces the named example", "[blocksolver]") {
  const BlowupSpec spec = blowup(star(4), {1, 2, 2, 1});
  REQUIRE(blowup_graph(spec) == g117());
  CHECK(is_block_graph(g117()));

  const std::vector<double> sigma{-1, -1, -1, 0, 1, 2};
  Rng rng(5);
  const BlowupRealization r = realize_blowup_of(spec, sigma, rng);
  REQUIRE(r.matrix.order() == 6);
  CHECK(in_pattern_strict(r.matrix, g117(), Tolerances{}.zero_tol));
  CHECK(multiset_distance(eigvals(r.matrix), {-1, -1, -1, 0, 1, 2}) <= 3e-6);
  CHECK(r.base_ssp.has_ssp);
  CHECK(r.sigma_base == std::vector<double>{-1, 0, 1, 2});
  CHECK(r.sigma_rest == std::vector<double>{-1, -1});
}

TEST_CASE("the non-block example goes through the closed-twin quotient",
          "[blocksolver]") {
  const Graph g = g150();
  REQUIRE_FALSE(is_block_graph(g));

  const BlowupSpec spec = twin_reduction(g);
  REQUIRE(spec.base == path(4));
  REQUIRE(spec.multiplicities == std::vector<int>{1, 2, 2, 1});
  REQUIRE(spec.vertex_map == std::vector<int>{0, 1, 1, 2, 2, 3});
  REQUIRE(blowup_graph(spec) == g);

  const std::vector<double> sigma{-1, -1, -1, 0, 1, 2};
  Rng rng(13);
  const auto cert = realize(g, sigma, rng);
  check_certificate(cert, g, sigma);
  CHECK_FALSE(cert.witness.has_value());
  REQUIRE_FALSE(cert.stages.empty());
  CHECK(cert.stages.front() == "closed-twin quotient");
}

TEST_CASE("closed-twin merging is exact on twin-free graphs", "[blocksolver]") {
  const Graph g(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}});  // 5-cycle
  const BlowupSpec spec = twin_reduction(g);
  CHECK(spec.base == g);
  CHECK(spec.multiplicities == std::vector<int>(5, 1));
}

TEST_CASE("generic realization handles a twin-free non-block graph directly",
          "[blocksolver]") {
  const Graph g(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}});  // 5-cycle
  const std::vector<double> sigma{-2, -1, 0, 1, 2};
  Rng rng(17);
  const auto cert = realize(g, sigma, rng);
  check_certificate(cert, g, sigma);
  CHECK_THROWS_AS(realize(g, {0, 0, 1, 2, 3}, rng), NotCertifiedError);
}

TEST_CASE("lollipop spectra below the distinct-value floor are rejected",
          "[blocksolver]") {
  Rng rng(29);
  // p + 2 = 5 distinct values required on lollipop(6, 3)
  std::vector<double> bad{1, 2, 3, 4, 4, 4, 4, 4, 4};
  try {
    realize_lollipop(6, 3, bad, rng);
    FAIL("expected InfeasibleError");
  } catch (const InfeasibleError& e) {
    CHECK(e.threshold == 5);
  }

  const std::vector<double> sigma{1, 2, 3, 4, 5, 5, 5, 5, 5};
  const auto cert = realize_lollipop(6, 3, sigma, rng);
  check_certificate(cert, lollipop(6, 3), sigma);
  REQUIRE(cert.reduced_ssp.has_value());
  CHECK(cert.reduced_ssp->has_ssp);
}

TEST_CASE("barbell spectra below the distinct-value floor are rejected",
          "[blocksolver]") {
  Rng rng(31);
  // p + 4 = 6 distinct values required on barbell(6, 2, 3)
  std::vector<double> bad{1, 1, 1, 1, 1, 1, 2, 3, 4, 5, 5};
  try {
    realize_barbell(6, 2, 3, bad, rng);
    FAIL("expected InfeasibleError");
  } catch (const InfeasibleError& e) {
    CHECK(e.threshold == 6);
  }

  const std::vector<double> sigma{1, 1, 1, 1, 1, 2, 3, 4, 5, 6, 6};
  const auto cert = realize_barbell(6, 2, 3, sigma, rng);
  check_certificate(cert, barbell(6, 2, 3), sigma);
}

TEST_CASE("two cliques joined by an edge fit the blowup of a four-path",
          "[blocksolver]") {
  const Graph g = barbell(3, 0, 3);
  REQUIRE(g.order() == 6);
  const auto dec = block_decomposition(g);
  REQUIRE(dec.blocks.size() == 3);
  CHECK(dec.blocks[0] == std::vector<int>{0, 1, 2});
  CHECK(dec.blocks[1] == std::vector<int>{2, 3});
  CHECK(dec.blocks[2] == std::vector<int>{3, 4, 5});

  REQUIRE(blowup_graph(blowup(path(4), {2, 1, 1, 2})) == g);

  const std::vector<double> sigma{1, 1, 2, 3, 4, 4};
  Rng rng(37);
  const auto cert = realize_barbell(3, 0, 3, sigma, rng);
  check_certificate(cert, g, sigma);
}

TEST_CASE("clique path counting check separates its three answers", "[blocksolver]") {
  const Tolerances tol;
  const auto no = feasibility_check_clique_path({2, 3, 2}, {1, 1, 2, 3, 3}, tol);
  CHECK(no.status == Feasibility::infeasible);
  CHECK(no.threshold == 4);

  const auto yes = feasibility_check_clique_path({2, 3, 2}, {1, 1, 2, 3, 4}, tol);
  CHECK(yes.status == Feasibility::feasible);

  // two interior cliques wider than an edge: no decision either way
  const std::vector<double> sigma9{1, 2, 3, 4, 5, 5, 5, 5, 5};
  const auto open = feasibility_check_clique_path({3, 3, 3, 3}, sigma9, tol);
  CHECK(open.status == Feasibility::unknown);

  const auto single = feasibility_check_clique_path({5}, {1, 1, 1, 2, 2}, tol);
  CHECK(single.status == Feasibility::feasible);
  const auto flat = feasibility_check_clique_path({5}, {3, 3, 3, 3, 3}, tol);
  CHECK(flat.status == Feasibility::infeasible);
  CHECK(flat.threshold == 2);
}

TEST_CASE("generic realization validates its input", "[blocksolver]") {
  Rng rng(41);
  CHECK_THROWS_AS(realize(path(3), {1, 2}, rng), std::invalid_argument);
  CHECK_THROWS_AS(realize(disjoint_union(path(2), path(2)), {1, 2, 3, 4}, rng),
                  std::invalid_argument);
  const auto cert = realize(complete(1), {4.5}, rng);
  REQUIRE(cert.matrix.order() == 1);
  CHECK(cert.matrix(0, 0) == 4.5);
  CHECK(cert.pattern_ok);
}
