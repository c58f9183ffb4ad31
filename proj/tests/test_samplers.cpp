#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "netinfer/netgen.hpp"
#include "netinfer/samplers.hpp"
#include "oracles.hpp"

using namespace netinfer;
using Catch::Approx;

namespace {

AttributedGraph make(std::size_t n, std::vector<Edge> edges) {
  std::vector<Label> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = label_from_index(i % 2);
  return AttributedGraph(std::move(labels), edges);
}

AttributedGraph star5() { return make(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}); }

AttributedGraph path(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return make(n, edges);
}

SamplerSpec spec_for(SamplingMethod m, double p, std::uint64_t seed = 0) {
  SamplerSpec s;
  s.method = m;
  s.fraction = p;
  s.seed = seed;
  return s;
}

}  // namespace

TEST_CASE("method names round trip", "[samplers]") {
  for (auto m : kAllMethods) CHECK(parse_method(name(m)) == m);
  CHECK(name(SamplingMethod::kPercolationDesc) == "percolationDESC");
  CHECK_THROWS_AS(parse_method("degreedesc"), InputError);
}

TEST_CASE("pagerank small cases", "[samplers][pagerank]") {
  const auto cycle = make(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  for (double x : pagerank(cycle)) CHECK(x == Approx(0.25).margin(1e-9));

  const auto single = make(1, {});
  CHECK(pagerank(single) == std::vector<double>{1.0});

  // A-B-C: a = (2 + d) / (6 (1 + d)), b = 1 - 2a.
  const auto pr = pagerank(path(3), 0.85, 1e-12);
  CHECK(pr[0] == Approx(0.256757).margin(1e-6));
  CHECK(pr[1] == Approx(0.486486).margin(1e-6));
  CHECK(pr[0] == Approx(pr[2]).margin(1e-12));
  CHECK(pr[1] > pr[0]);
}

TEST_CASE("pagerank with dangling nodes", "[samplers][pagerank]") {
  const auto g = make(4, {{0, 1}});
  const auto pr = pagerank(g);
  CHECK(std::accumulate(pr.begin(), pr.end(), 0.0) == Approx(1.0).margin(1e-7));
  CHECK(pr[2] == Approx(pr[3]));
  CHECK(pr[0] > pr[2]);
}

TEST_CASE("collective influence on a path", "[samplers][ci]") {
  const auto ci = collective_influence(path(5), 2);
  CHECK(ci[2] == 0);
  CHECK(ci[1] == 1);
  CHECK(ci[3] == 1);
  CHECK(ci[0] == 0);  // leaf
  const auto lonely = collective_influence(make(3, {{0, 1}}), 2);
  CHECK(lonely[2] == 0);  // isolated
}

TEST_CASE("ranked samplers on a star", "[samplers]") {
  const auto star = star5();
  CHECK(sample(star, spec_for(SamplingMethod::kDegreeDesc, 0.2)).nodes == std::vector<NodeId>{0});
  CHECK(sample(star, spec_for(SamplingMethod::kDegreeAsc, 0.2)).nodes == std::vector<NodeId>{1});
  CHECK(sample(star, spec_for(SamplingMethod::kDegreeMix, 0.4)).nodes ==
        std::vector<NodeId>{0, 1});
  CHECK(sample(star, spec_for(SamplingMethod::kPagerankDesc, 0.2)).nodes ==
        std::vector<NodeId>{0});
}

TEST_CASE("nedges with a single edge", "[samplers]") {
  const auto g = make(10, {{0, 1}});
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    CHECK(sample(g, spec_for(SamplingMethod::kNedges, 0.2, seed)).nodes ==
          std::vector<NodeId>{0, 1});
  }
}

TEST_CASE("full fraction returns every node", "[samplers]") {
  const auto g = generate({60, 2, 0.5, 0.5, 4});
  std::vector<NodeId> all(60);
  std::iota(all.begin(), all.end(), NodeId{0});
  for (auto m : kAllMethods) CHECK(sample(g, spec_for(m, 1.0, 3)).nodes == all);
}

TEST_CASE("sampler errors", "[samplers]") {
  const auto g = path(10);
  CHECK_THROWS_AS(sample(g, spec_for(SamplingMethod::kNodes, 0.05)), InputError);
  CHECK_THROWS_AS(sample(g, spec_for(SamplingMethod::kNodes, 0.0)), InputError);
  CHECK_THROWS_AS(sample(g, spec_for(SamplingMethod::kNodes, 1.5)), InputError);
  CHECK_THROWS_AS(sample(make(1, {}), spec_for(SamplingMethod::kNodes, 1.0)), InputError);
  auto bad = spec_for(SamplingMethod::kPercolationDesc, 0.5);
  bad.ci_radius = 0;
  CHECK_THROWS_AS(sample(g, bad), InputError);
}

TEST_CASE("sample size rounds up", "[samplers]") {
  CHECK(sample_size(0.3, 10) == 3);
  CHECK(sample_size(0.05, 2000) == 100);
  CHECK(sample_size(0.21, 10) == 3);
  CHECK(sample_size(0.05, 10) == 1);
}

TEST_CASE("sample invariants on random graphs", "[samplers][property]") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> frac(0.05, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const auto g = oracle::random_graph(rng, 40, 0.3);
    if (g.node_count() < 2) continue;
    const double p = frac(rng);
    if (p * static_cast<double>(g.node_count()) < 1.0) continue;
    const auto want = sample_size(p, g.node_count());
    for (auto m : kAllMethods) {
      const auto s = spec_for(m, p, trial);
      const auto a = sample(g, s);
      REQUIRE(a.nodes.size() == want);
      REQUIRE(std::is_sorted(a.nodes.begin(), a.nodes.end()));
      REQUIRE(std::adjacent_find(a.nodes.begin(), a.nodes.end()) == a.nodes.end());
      REQUIRE(a.nodes.back() < g.node_count());
      REQUIRE(sample(g, s).nodes == a.nodes);
    }

    const auto top = sample(g, spec_for(SamplingMethod::kDegreeDesc, p)).nodes;
    std::vector<char> in(g.node_count(), 0);
    for (auto v : top) in[v] = 1;
    std::size_t min_in = SIZE_MAX, max_out = 0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (in[v]) min_in = std::min(min_in, g.degree(v));
      else max_out = std::max(max_out, g.degree(v));
    }
    REQUIRE(min_in >= max_out);
  }
}

TEST_CASE("pagerank is a distribution above the teleport floor", "[samplers][pagerank][property]") {
  std::mt19937_64 rng(5);
  const double tol = 1e-8, d = 0.85;
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = oracle::random_graph(rng, 60, 0.2);
    const auto pr = pagerank(g, d, tol);
    const double n = static_cast<double>(g.node_count());
    REQUIRE(std::accumulate(pr.begin(), pr.end(), 0.0) == Approx(1.0).margin(10 * tol));
    for (double x : pr) REQUIRE(x >= (1.0 - d) / n - tol);
  }
}

TEST_CASE("collective influence matches the all-pairs oracle", "[samplers][ci][oracle]") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = oracle::random_graph(rng, 30);
    for (int radius : {1, 2, 3}) {
      REQUIRE(collective_influence(g, radius) == oracle::collective_influence(g, radius));
    }
  }
}

TEST_CASE("pagerank matches the dense oracle", "[samplers][pagerank][oracle]") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = oracle::random_graph(rng, 20, 0.5);
    const auto fast = pagerank(g, 0.85, 1e-12);
    const auto slow = oracle::dense_pagerank(g, 0.85);
    double l1 = 0.0;
    for (std::size_t i = 0; i < fast.size(); ++i) l1 += std::abs(fast[i] - slow[i]);
    REQUIRE(l1 < 1e-6);
  }
}

TEST_CASE("snowball grows from one start", "[samplers]") {
  // On a connected path the BFS ball is contiguous.
  const auto g = path(30);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = sample(g, spec_for(SamplingMethod::kSnowball, 0.2, seed)).nodes;
    REQUIRE(s.size() == 6);
    CHECK(s.back() - s.front() == 5);
  }
}
