#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hyplap/errors.hpp"
#include "hyplap/functional.hpp"
#include "instances.hpp"

using namespace hyplap;
using namespace hyplap::testing;

namespace {

const std::vector<double> kH1Minimizer{4.0, 2.5, 0.0, 2.5, 3.0, 3.0};
const std::vector<double> kH2Solution{0.0, 1.0, 1.5, 2.0, 2.0, 2.5, 3.0};

// F_H as the max over all ordered pairs |u_i - u_j|^p, written independently
// of the library's max - min form.
double fh_pairwise(const Hypergraph& h, const std::vector<double>& u, double p) {
  double total = 0.0;
  for (EdgeId k = 0; k < h.num_edges(); ++k) {
    double best = 0.0;
    for (VertexId i : h.edge(k)) {
      for (VertexId j : h.edge(k)) best = std::max(best, std::pow(std::abs(u[i] - u[j]), p));
    }
    total += h.weight(k) * best;
  }
  return total;
}

// F_CE by summing over ordered pairs and halving.
double fce_ordered_half(const Hypergraph& h, const std::vector<double>& u, double p) {
  double total = 0.0;
  for (EdgeId k = 0; k < h.num_edges(); ++k) {
    double inner = 0.0;
    for (VertexId i : h.edge(k)) {
      for (VertexId j : h.edge(k)) inner += std::pow(std::abs(u[i] - u[j]), p);
    }
    total += h.weight(k) * inner / 2.0;
  }
  return total;
}

Certificate h1_certificate() {
  Certificate c = Certificate::zero(4);
  c.selections[0] = {{0, 1, 1.0}};
  c.selections[1] = {{1, 2, 0.6}, {3, 2, 0.4}};
  c.selections[2] = {{4, 3, 1.0}};
  c.selections[3] = {{5, 3, 1.0}};
  return c;
}

// Random admissible selection from the argmax faces at u.
Certificate random_certificate(Rng& rng, const Hypergraph& h, const std::vector<double>& u) {
  Certificate c = Certificate::zero(h.num_edges());
  for (EdgeId k = 0; k < h.num_edges(); ++k) {
    const Face f = argmax_face(h, u, k);
    if (f.degenerate) continue;
    double sum = 0.0;
    for (VertexId i : f.argmax) {
      for (VertexId j : f.argmin) {
        const double w = uniform01(rng) + 1e-3;
        c.selections[k].push_back({i, j, w});
        sum += w;
      }
    }
    for (auto& pc : c.selections[k]) pc.coefficient /= sum;
  }
  return c;
}

}  // namespace

TEST_CASE("F_H on the hand instances") {
  CHECK(eval_fh(h1_hypergraph(), kH1Minimizer, 2.0) == doctest::Approx(9.0).epsilon(1e-15));
  CHECK(eval_fh(h2_hypergraph(), kH2Solution, 2.0) == doctest::Approx(3.0).epsilon(1e-15));
  const std::vector<double> constant(6, 1.7);
  for (double p : {1.1, 2.0, 3.5}) CHECK(eval_fh(h1_hypergraph(), constant, p) == 0.0);
}

TEST_CASE("F_CE and F_G small values") {
  const Hypergraph tri(3, std::vector<RawEdge>{{1.0, {0, 1, 2}}});
  const std::vector<double> u{0.0, 1.0, 2.0};
  CHECK(eval_fce(tri, u, 2.0) == doctest::Approx(6.0));
  CHECK(eval_fce(tri, u, 3.0) == doctest::Approx(1.0 + 8.0 + 1.0));
  CHECK(eval_fce(tri, std::vector<double>(3, 5.0), 2.0) == 0.0);

  const Hypergraph path(3, std::vector<RawEdge>{{1.0, {0, 1}}, {1.0, {1, 2}}});
  CHECK(eval_fg(path, u, 2.0) == doctest::Approx(2.0));
  CHECK(eval_fg(path, std::vector<double>(3, -1.0), 2.0) == 0.0);
  CHECK(eval_fg(clique_expansion(tri), u, 2.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(eval_fg(tri, u, 2.0), ValidationError);
}

TEST_CASE("functionals reject bad exponents and lengths") {
  const Hypergraph h = h1_hypergraph();
  for (double p : {1.0, 0.5, -2.0, std::nan("")}) {
    CHECK_THROWS_AS(eval_fh(h, kH1Minimizer, p), ParameterError);
    CHECK_THROWS_AS(eval_fce(h, kH1Minimizer, p), ParameterError);
  }
  CHECK_THROWS_AS(eval_fh(h, std::vector<double>(5, 0.0), 2.0), ValidationError);
  CHECK_THROWS_AS(eval_fce(h, std::vector<double>(7, 0.0), 2.0), ValidationError);
}

TEST_CASE("functionals agree with pairwise reference formulas") {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const Hypergraph h = random_connected_hypergraph(rng, {});
    const auto u = random_function(rng, h.num_vertices(), -3.0, 3.0);
    const double p = uniform_real(rng, 1.05, 4.0);
    CHECK(eval_fh(h, u, p) == doctest::Approx(fh_pairwise(h, u, p)).epsilon(1e-12));
    CHECK(eval_fce(h, u, p) == doctest::Approx(fce_ordered_half(h, u, p)).epsilon(1e-12));
    CHECK(eval_fce(h, u, 2.0) == doctest::Approx(fce_ordered_half(h, u, 2.0)).epsilon(1e-12));
  }
}

TEST_CASE("F_H is bounded by F_CE for unit weights") {
  Rng rng(22);
  InstanceShape shape;
  shape.unit_weights = true;
  for (int trial = 0; trial < 200; ++trial) {
    const Hypergraph h = random_connected_hypergraph(rng, shape);
    const auto u = random_function(rng, h.num_vertices());
    const double p = uniform_real(rng, 1.05, 4.0);
    CHECK(eval_fh(h, u, p) <= eval_fce(h, u, p) * (1.0 + 1e-12));
  }
}

TEST_CASE("F_H scales as |c|^p and ignores shifts") {
  Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const Hypergraph h = random_connected_hypergraph(rng, {});
    auto u = random_function(rng, h.num_vertices());
    const double p = uniform_real(rng, 1.05, 4.0);
    const double c = uniform_real(rng, -3.0, 3.0);
    const double d = uniform_real(rng, -10.0, 10.0);
    std::vector<double> v(u.size());
    std::transform(u.begin(), u.end(), v.begin(), [&](double x) { return c * x + d; });
    CHECK(eval_fh(h, v, p) == doctest::Approx(std::pow(std::abs(c), p) * eval_fh(h, u, p)).epsilon(1e-9));
  }
}

TEST_CASE("the three functionals coincide on 2-uniform hypergraphs") {
  Rng rng(24);
  for (int trial = 0; trial < 100; ++trial) {
    const Hypergraph g = random_connected_graph(rng, 30, 40);
    const auto u = random_function(rng, g.num_vertices());
    const double p = uniform_real(rng, 1.05, 4.0);
    const double fg = eval_fg(g, u, p);
    CHECK(eval_fh(g, u, p) == doctest::Approx(fg).epsilon(1e-12));
    CHECK(eval_fce(g, u, p) == doctest::Approx(fg).epsilon(1e-12));
  }
}

TEST_CASE("argmax faces") {
  const Face f1 = argmax_face(h1_hypergraph(), kH1Minimizer, 1);
  CHECK(f1.argmax == std::vector<VertexId>{1, 3});
  CHECK(f1.argmin == std::vector<VertexId>{2});
  CHECK_FALSE(f1.degenerate);

  const Face f2 = argmax_face(h2_hypergraph(), kH2Solution, 2);
  CHECK(f2.argmax == std::vector<VertexId>{6});
  CHECK(f2.argmin == std::vector<VertexId>{3, 4});

  const Face flat = argmax_face(h1_hypergraph(), std::vector<double>(6, 2.0), 1);
  CHECK(flat.degenerate);
  CHECK(flat.argmax.size() == 3);

  // Tolerance widens the face.
  const std::vector<double> near{0.0, 1.0, 1.0 - 1e-12, 0.5, 0.0, 0.0};
  CHECK(argmax_face(h1_hypergraph(), near, 1).argmax == std::vector<VertexId>{1, 2});
  CHECK(argmax_face(h1_hypergraph(), near, 1, 0.0).argmax == std::vector<VertexId>{1});
}

TEST_CASE("H1 certificate") {
  const Hypergraph h = h1_hypergraph();
  const Certificate c = h1_certificate();
  const auto q = subgradient_from_certificate(h, kH1Minimizer, 2.0, c);
  CHECK(std::abs(q[1]) <= 1e-12);
  CHECK(std::abs(q[3]) <= 1e-12);
  CHECK(verify_stationarity(h, kH1Minimizer, 2.0, h1_labels(), c) <= 1e-12);

  const auto beta = c.beta(1, 6);
  CHECK(beta[1] == doctest::Approx(0.6));
  CHECK(beta[3] == doctest::Approx(0.4));
  CHECK(beta[2] == doctest::Approx(-1.0));
}

TEST_CASE("subgradient small cases") {
  const Hypergraph pair(2, std::vector<RawEdge>{{1.0, {0, 1}}});
  Certificate c = Certificate::zero(1);
  c.selections[0] = {{1, 0, 1.0}};
  const auto q = subgradient_from_certificate(pair, std::vector<double>{0.0, 1.0}, 2.0, c);
  CHECK(q == std::vector<double>{-2.0, 2.0});

  const auto zero = subgradient_from_certificate(h1_hypergraph(), std::vector<double>(6, 1.0), 2.0,
                                                 Certificate::zero(4));
  CHECK(zero == std::vector<double>(6, 0.0));
}

TEST_CASE("H2 solution is stationary") {
  Certificate c = Certificate::zero(3);
  c.selections[0] = {{1, 0, 1.0}};
  c.selections[1] = {{3, 1, 0.5}, {4, 1, 0.5}};
  c.selections[2] = {{6, 3, 0.5}, {6, 4, 0.5}};
  CHECK(verify_stationarity(h2_hypergraph(), kH2Solution, 2.0, h2_labels(), c) <= 1e-12);
}

TEST_CASE("inadmissible certificates are rejected") {
  const Hypergraph h = h1_hypergraph();
  Certificate c = h1_certificate();
  SUBCASE("wrong size") {
    c.selections.pop_back();
    CHECK_THROWS_AS(check_certificate(h, kH1Minimizer, c), ValidationError);
  }
  SUBCASE("pair outside the face") {
    c.selections[1] = {{1, 3, 1.0}};
    CHECK_THROWS_AS(check_certificate(h, kH1Minimizer, c), ValidationError);
  }
  SUBCASE("negative coefficient") {
    c.selections[1] = {{1, 2, 1.2}, {3, 2, -0.2}};
    CHECK_THROWS_AS(check_certificate(h, kH1Minimizer, c), ValidationError);
  }
  SUBCASE("not normalized") {
    c.selections[1] = {{1, 2, 0.6}, {3, 2, 0.6}};
    CHECK_THROWS_AS(check_certificate(h, kH1Minimizer, c), ValidationError);
  }
  SUBCASE("empty on a non-constant hyperedge") {
    c.selections[2].clear();
    CHECK_THROWS_AS(subgradient_from_certificate(h, kH1Minimizer, 2.0, c), ValidationError);
  }
  SUBCASE("labels mismatch") {
    std::vector<double> u = kH1Minimizer;
    u[0] = 3.0;
    CHECK_THROWS_AS(verify_stationarity(h, u, 2.0, h1_labels(), c), ValidationError);
  }
}

TEST_CASE("subgradient inequality holds for random admissible certificates") {
  Rng rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const Hypergraph h = random_connected_hypergraph(rng, {});
    auto u = random_function(rng, h.num_vertices());
    // Create ties so that faces with several pairs occur.
    for (double& x : u) x = std::round(x * 4.0) / 4.0;
    const double p = uniform_real(rng, 1.0 + 1e-3, 3.5);
    const Certificate c = random_certificate(rng, h, u);
    const auto q = subgradient_from_certificate(h, u, p, c);
    const double fu = eval_fh(h, u, p);
    for (int s = 0; s < 100; ++s) {
      const auto v = random_function(rng, h.num_vertices(), -1.5, 1.5);
      double dot = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) dot += q[i] * (v[i] - u[i]);
      CHECK(dot <= eval_fh(h, v, p) - fu + 1e-9);
    }
  }
}

TEST_CASE("stationarity residual does not depend on hyperedge order") {
  Rng rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    const Hypergraph h = random_connected_hypergraph(rng, {});
    const auto u = random_function(rng, h.num_vertices());
    const Labeling labels = random_labels(rng, h.num_vertices(), 5);
    std::vector<double> uu = u;
    labels.impose(uu);
    const Certificate cu = random_certificate(rng, h, uu);

    std::vector<EdgeId> perm(h.num_edges());
    std::iota(perm.begin(), perm.end(), EdgeId{0});
    for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[uniform_index(rng, i)]);
    const auto raw = h.raw_edges();
    std::vector<RawEdge> shuffled;
    Certificate cp = Certificate::zero(h.num_edges());
    for (std::size_t k = 0; k < perm.size(); ++k) {
      shuffled.push_back(raw[perm[k]]);
      cp.selections[k] = cu.selections[perm[k]];
    }
    const Hypergraph hp(h.num_vertices(), shuffled);
    const double r1 = verify_stationarity(h, uu, 2.0, labels, cu);
    const double r2 = verify_stationarity(hp, uu, 2.0, labels, cp);
    CHECK(r2 == doctest::Approx(r1).epsilon(1e-12));
  }
}

TEST_CASE("certificate search") {
  SUBCASE("recovers the H1 coefficients") {
    const CertificateSearch s = find_certificate(h1_hypergraph(), kH1Minimizer, 2.0, h1_labels());
    REQUIRE(s.certificate.has_value());
    CHECK(s.residual <= 1e-9);
    const auto beta = s.certificate->beta(1, 6);
    CHECK(beta[1] == doctest::Approx(0.6).epsilon(1e-9));
    CHECK(beta[3] == doctest::Approx(0.4).epsilon(1e-9));
  }
  SUBCASE("H2 solution") {
    const CertificateSearch s = find_certificate(h2_hypergraph(), kH2Solution, 2.0, h2_labels());
    CHECK(s.certificate.has_value());
  }
  SUBCASE("constant data gives the zero certificate") {
    const Labeling l(6, {{0, 2.0}, {5, 2.0}});
    const CertificateSearch s = find_certificate(h1_hypergraph(), std::vector<double>(6, 2.0), 2.0, l);
    REQUIRE(s.certificate.has_value());
    CHECK(s.residual == 0.0);
    CHECK(s.face_pairs == 0);
    for (const auto& sel : s.certificate->selections) CHECK(sel.empty());
  }
  SUBCASE("non-minimizers are infeasible") {
    const CertificateSearch a =
        find_certificate(h1_hypergraph(), std::vector<double>{4, 3, 0, 1, 3, 3}, 2.0, h1_labels());
    CHECK_FALSE(a.certificate.has_value());
    CHECK(a.residual > 1e-3);
    const CertificateSearch b =
        find_certificate(h1_hypergraph(), std::vector<double>{4, 4, 0, 2.5, 3, 3}, 2.0, h1_labels());
    CHECK_FALSE(b.certificate.has_value());
    CHECK(b.residual > 1e-3);
  }
  SUBCASE("size guard") {
    std::vector<VertexId> all(130);
    std::iota(all.begin(), all.end(), VertexId{0});
    const Hypergraph big(130, std::vector<RawEdge>{{1.0, all}});
    std::vector<double> u(130, 0.0);
    for (std::size_t i = 0; i < 65; ++i) u[i] = 1.0;
    const Labeling l(130, {{0, 1.0}});
    CHECK_THROWS_AS(find_certificate(big, u, 2.0, l), SizeError);
  }
}

TEST_CASE("certificate search result always satisfies its own residual") {
  Rng rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    const Hypergraph h = random_connected_hypergraph(rng, {2, 12, 4, 6, false});
    const Labeling labels = random_labels(rng, h.num_vertices(), 4);
    auto u = random_function(rng, h.num_vertices());
    labels.impose(u);
    const CertificateSearch s = find_certificate(h, u, 2.0, labels);
    if (s.certificate) {
      CHECK_NOTHROW(check_certificate(h, u, *s.certificate));
      CHECK(verify_stationarity(h, u, 2.0, labels, *s.certificate) <= 1e-9);
    } else {
      CHECK(s.residual > 1e-9);
    }
  }
}

TEST_CASE("certificate JSON round-trip") {
  const Certificate c = h1_certificate();
  const Certificate back = certificate_from_json(certificate_to_json(c), 4);
  REQUIRE(back.selections.size() == 4);
  for (EdgeId k = 0; k < 4; ++k) CHECK(back.beta(k, 6) == c.beta(k, 6));
  CHECK_THROWS_AS(certificate_from_json("[1,2]", 4), ValidationError);
  CHECK_THROWS_AS(certificate_from_json("{\"9\": []}", 4), ValidationError);
  CHECK_THROWS_AS(certificate_from_json("{\"x\": []}", 4), ValidationError);
  CHECK_THROWS_AS(certificate_from_json("{\"0\": [{\"max\": 1}]}", 4), ValidationError);
  CHECK_THROWS_AS(certificate_from_json("not json", 4), ValidationError);
}
