#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hyplap/errors.hpp"
#include "hyplap/functional.hpp"
#include "hyplap/oracle.hpp"
#include "hyplap/solver.hpp"
#include "instances.hpp"

using namespace hyplap;
using namespace hyplap::testing;

namespace {

const std::vector<double> kH1Minimizer{4.0, 2.5, 0.0, 2.5, 3.0, 3.0};
const Hypergraph kTriple(3, std::vector<RawEdge>{{1.0, {0, 1, 2}}});
const Labeling kTripleLabels(3, {{0, 0.0}, {2, 1.0}});

}  // namespace

TEST_CASE("D set on the H1 minimizer is all of V") {
  const DSet d = compute_d(h1_hypergraph(), kH1Minimizer, h1_labels(), 2.0);
  CHECK(d.members == std::vector<VertexId>{0, 1, 2, 3, 4, 5});
  REQUIRE(d.witnesses.size() == 2);
  CHECK(d.witnesses[0].vertex == 1);
  CHECK(d.witnesses[1].vertex == 3);
  // x1 is the max of {1,2,3} and the min of {0,1}.
  CHECK(d.witnesses[0].min_edge == 0);
  CHECK(d.witnesses[0].max_edge == 1);
  CHECK(d.contains(3));
}

TEST_CASE("a free vertex inside one hyperedge is not pinned") {
  const DSet d = compute_d(kTriple, std::vector<double>{0.0, 0.5, 1.0}, kTripleLabels, 2.0);
  CHECK(d.members == std::vector<VertexId>{0, 2});
  CHECK(d.witnesses.empty());
  CHECK_FALSE(d.contains(1));
  CHECK_THROWS_AS(compute_d(kTriple, std::vector<double>{0.0, 0.5, 1.0}, kTripleLabels, 2.0, 0.0),
                  ParameterError);
}

TEST_CASE("per-hyperedge extremes") {
  const Hypergraph h = h1_hypergraph();
  auto v = kH1Minimizer;
  CHECK(check_lemma_maxmin(h, kH1Minimizer, v, 0.0));
  v[1] = 2.4;  // changes the min of {0,1} only
  CHECK_FALSE(check_lemma_maxmin(h, kH1Minimizer, v, 1e-3));
  CHECK(check_lemma_maxmin(h, kH1Minimizer, v, 0.2));
  CHECK(check_lemma_maxmin(kTriple, std::vector<double>{0.0, 0.2, 1.0}, std::vector<double>{0.0, 0.8, 1.0},
                           1e-12));
}

TEST_CASE("oracle minimizers on the H1 hypergraph") {
  const std::uint64_t seeds[] = {1, 2, 3};
  const PropositionCheck pc = check_proposition_d(h1_hypergraph(), h1_labels(), 2.0, seeds);
  CHECK(pc.holds);
  CHECK(pc.maxmin_agree);
  CHECK(pc.d_sets_agree);
  CHECK(pc.values_agree_on_d);
  REQUIRE(pc.minimizers.size() == 3);
  for (std::size_t s = 0; s < 3; ++s) {
    CHECK(std::abs(pc.objectives[s] - 9.0) <= 1e-3);
    for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(pc.minimizers[s][i] - kH1Minimizer[i]) <= 1e-3);
  }
}

TEST_CASE("oracle on a single hyperedge leaves the middle vertex free") {
  const std::uint64_t seeds[] = {4, 5};
  const PropositionCheck pc = check_proposition_d(kTriple, kTripleLabels, 2.0, seeds, 100'000);
  CHECK(pc.holds);
  REQUIRE(pc.d_sets.size() == 2);
  CHECK(pc.d_sets[0].members == std::vector<VertexId>{0, 2});
  for (const auto& u : pc.minimizers) {
    CHECK(u[1] >= 0.0);
    CHECK(u[1] <= 1.0);
  }
}

TEST_CASE("oracle with every vertex labeled") {
  const Labeling all(3, {{0, 0.0}, {1, 0.25}, {2, 1.0}});
  const std::uint64_t seeds[] = {1, 2};
  const PropositionCheck pc = check_proposition_d(kTriple, all, 2.0, seeds, 1000);
  CHECK(pc.holds);
  CHECK(pc.minimizers[0] == std::vector<double>{0.0, 0.25, 1.0});
  CHECK(pc.d_sets[0].members == std::vector<VertexId>{0, 1, 2});
}

TEST_CASE("oracle refuses large instances") {
  std::vector<RawEdge> edges;
  for (VertexId i = 0; i + 1 < 65; ++i) edges.push_back({1.0, {i, i + 1}});
  const Hypergraph big(65, edges);
  const Labeling l(65, {{0, 0.0}, {64, 1.0}});
  CHECK_THROWS_AS(minimize_fh_oracle(big, l, 2.0, 10, 1), SizeError);
  const std::uint64_t seeds[] = {1};
  CHECK_THROWS_AS(check_proposition_d(big, l, 2.0, seeds, 10), SizeError);
  CHECK_THROWS_AS(compute_d(big, std::vector<double>(65, 0.0), l, 2.0), SizeError);
}

TEST_CASE("oracle and AE on the hand instances") {
  SUBCASE("H2: they coincide on D") {
    const Hypergraph h = h2_hypergraph();
    const VertexFunction u = minimize_fh_oracle(h, h2_labels(), 2.0, kOracleDefaultIterations, 7);
    SolverConfig cfg;
    cfg.tol = 1e-12;
    const Solution ae = solve_ae_p2(h, h2_labels(), cfg);
    CHECK(std::abs(eval_fh(h, u, 2.0) - eval_fh(h, ae.u, 2.0)) <= 1e-3);
    const DSet d = compute_d(h, u, h2_labels(), 2.0);
    CHECK(d.contains(1));
    for (VertexId v : d.members) CHECK(std::abs(u[v] - ae.u[v]) <= 1e-3);
  }
  SUBCASE("H1: they differ at x1") {
    const VertexFunction u =
        minimize_fh_oracle(h1_hypergraph(), h1_labels(), 2.0, kOracleDefaultIterations, 7);
    SolverConfig cfg;
    cfg.tol = 1e-12;
    const Solution ae = solve_ae_p2(h1_hypergraph(), h1_labels(), cfg);
    CHECK(std::abs(u[1] - ae.u[1] - 0.5) <= 1e-3);
  }
}

TEST_CASE("the oracle minimizer admits a certificate") {
  const VertexFunction u = minimize_fh_oracle(h1_hypergraph(), h1_labels(), 2.0, kOracleDefaultIterations, 11);
  const CertificateSearch cs = find_certificate(h1_hypergraph(), u, 2.0, h1_labels(), 1e-3, 1e-3);
  REQUIRE(cs.certificate.has_value());
  CHECK(cs.residual <= 1e-3);
}

TEST_CASE("oracle results respect the label range") {
  Rng rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    const Hypergraph h = random_connected_hypergraph(rng, {2, 10, 5, 6, false});
    const Labeling l = random_labels(rng, h.num_vertices(), 3);
    const VertexFunction u = minimize_fh_oracle(h, l, 2.0, 20'000, trial);
    CHECK(l.matches(u, 0.0));
    for (double x : u) {
      CHECK(x >= l.min_value() - 1e-9);
      CHECK(x <= l.max_value() + 1e-9);
    }
  }
}
