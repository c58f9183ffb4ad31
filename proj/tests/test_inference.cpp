#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "netinfer/inference.hpp"
#include "netinfer/netgen.hpp"
#include "netinfer/samplers.hpp"
#include "oracles.hpp"

using namespace netinfer;
using Catch::Approx;

namespace {

// Class 0 is blue, class 1 is red.
constexpr Label kBlue = Label::kZero;
constexpr Label kRed = Label::kOne;

// A C E red, B D F blue; 2 of the 7 edges join same-colored nodes.
enum : NodeId { A, B, C, D, E, F };
AttributedGraph toy() {
  return AttributedGraph({kRed, kBlue, kRed, kBlue, kRed, kBlue},
                         std::vector<Edge>{{A, B}, {B, C}, {C, E}, {B, D}, {C, D}, {D, E}, {E, F}});
}

AttributedGraph with_labels(std::size_t n, std::vector<Label> labels) {
  labels.resize(n, kBlue);
  return AttributedGraph(std::move(labels), std::vector<Edge>{});
}

RelationalModel model_with(std::array<ClassDist, 2> cond) {
  RelationalModel m;
  m.cond = cond;
  return m;
}

AttributedGraph swapped(const AttributedGraph& g) {
  std::vector<Label> labels(g.labels().begin(), g.labels().end());
  for (auto& l : labels) l = flip(l);
  return AttributedGraph(std::move(labels), g.edges());
}

}  // namespace

TEST_CASE("class priors are Laplace smoothed", "[inference]") {
  const auto six = with_labels(6, {kBlue, kBlue, kBlue, kRed, kRed, kRed});
  const std::vector<NodeId> all6{0, 1, 2, 3, 4, 5};
  CHECK(learn_local(six, all6).prior == ClassDist{0.5, 0.5});

  const std::vector<NodeId> two_blue{0, 1};
  CHECK(learn_local(six, two_blue).prior[0] == Approx(0.75));
  CHECK(learn_local(six, two_blue).prior[1] == Approx(0.25));

  const std::vector<NodeId> one_red{4};
  CHECK(learn_local(six, one_red).prior[0] == Approx(1.0 / 3));
  CHECK(learn_local(six, one_red).prior[1] == Approx(2.0 / 3));

  CHECK_THROWS_AS(learn_local(six, std::vector<NodeId>{}), InputError);
  CHECK_THROWS_AS(learn_local(six, std::vector<NodeId>{6}), InputError);
}

TEST_CASE("relational model from a heterophilic sample", "[inference]") {
  const auto g = toy();
  const std::vector<NodeId> seeds{B, C};
  const auto m = learn_relational(g, seeds);
  CHECK(m.cond[index(kRed)][index(kBlue)] == Approx(2.0 / 3));
  CHECK(m.cond[index(kRed)][index(kRed)] == Approx(1.0 / 3));
  CHECK(m.cond[index(kBlue)][index(kRed)] == Approx(2.0 / 3));
}

TEST_CASE("relational model without seed edges is uniform", "[inference]") {
  const auto g = toy();
  const std::vector<NodeId> seeds{A, C, F};
  const auto m = learn_relational(g, seeds);
  for (const auto& row : m.cond) CHECK(row == ClassDist{0.5, 0.5});
}

TEST_CASE("relational model from a homophilic sample", "[inference]") {
  // Seeds C, E (red) and B, D (blue) joined only by C-E and B-D. Each edge
  // is counted once in each direction, so n[c][c] = 2 and the smoothed
  // same-class probability is (2 + 1) / (2 + 2).
  const AttributedGraph g({kBlue, kRed, kBlue, kRed}, std::vector<Edge>{{1, 3}, {0, 2}});
  const std::vector<NodeId> seeds{0, 1, 2, 3};
  const auto m = learn_relational(g, seeds);
  CHECK(m.cond[0][0] == Approx(0.75));
  CHECK(m.cond[1][1] == Approx(0.75));
  CHECK(m.cond[0][1] == Approx(0.25));
}

TEST_CASE("two-node graph follows the learned mixing", "[inference]") {
  // A (node 0) is unlabelled, B (node 1) is a blue seed.
  const AttributedGraph g({kRed, kBlue}, std::vector<Edge>{{0, 1}});
  const std::vector<NodeId> seeds{1};
  const double hi = 2.0 / 3, lo = 1.0 / 3;

  const auto hetero = model_with({ClassDist{lo, hi}, ClassDist{hi, lo}});
  CHECK(predict(relaxation_label(g, seeds, hetero).p[0]) == kRed);

  const auto homo = model_with({ClassDist{hi, lo}, ClassDist{lo, hi}});
  CHECK(predict(relaxation_label(g, seeds, homo).p[0]) == kBlue);
}

TEST_CASE("all seeds gives one-hot truth", "[inference]") {
  const auto g = toy();
  const std::vector<NodeId> seeds{A, B, C, D, E, F};
  const auto post = relaxation_label(g, seeds, learn_relational(g, seeds));
  for (NodeId v = 0; v < 6; ++v) {
    CHECK(post.frozen[v]);
    CHECK(post.p[v][index(g.label(v))] == 1.0);
    CHECK(predict(post.p[v]) == g.label(v));
  }
}

TEST_CASE("predict ties go to class 0", "[inference]") {
  CHECK(predict(ClassDist{0.9, 0.1}) == Label::kZero);
  CHECK(predict(ClassDist{0.2, 0.8}) == Label::kOne);
  CHECK(predict(ClassDist{0.5, 0.5}) == Label::kZero);
}

TEST_CASE("isolated unlabelled nodes keep the priors", "[inference]") {
  const AttributedGraph g({kBlue, kRed, kBlue}, std::vector<Edge>{{0, 1}});
  const std::vector<NodeId> seeds{0, 1};
  const auto model = learn_relational(g, seeds);
  const auto post = relaxation_label(g, seeds, model);
  CHECK(post.p[2] == model.priors.prior);
}

TEST_CASE("relaxation parameters are validated", "[inference]") {
  const auto g = toy();
  const std::vector<NodeId> seeds{B};
  const auto model = learn_relational(g, seeds);
  CHECK_THROWS_AS(relaxation_label(g, seeds, model, {0, 1.0, 0.99}), InputError);
  CHECK_THROWS_AS(relaxation_label(g, seeds, model, {10, 1.0, 1.0}), InputError);
  CHECK_THROWS_AS(relaxation_label(g, seeds, model, {10, 0.0, 0.5}), InputError);
}

TEST_CASE("posterior rows stay normalized and seeds stay fixed", "[inference][property]") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = oracle::random_graph(rng, 40, 0.3);
    if (g.node_count() < 5) continue;
    const auto seeds = sample(g, {SamplingMethod::kNodes, 0.3, std::uint64_t(trial)}).nodes;
    const auto model = learn_relational(g, seeds);
    int sweeps = 0;
    relaxation_label(g, seeds, model, {30, 1.0, 0.9}, [&](int t, const Posteriors& post) {
      REQUIRE(t == ++sweeps);
      for (NodeId v = 0; v < g.node_count(); ++v) {
        const auto& row = post.p[v];
        REQUIRE(std::isfinite(row[0]));
        REQUIRE(std::isfinite(row[1]));
        REQUIRE(std::abs(row[0] + row[1] - 1.0) <= 1e-9);
        if (post.frozen[v]) REQUIRE(row[index(g.label(v))] == 1.0);
      }
    });
    REQUIRE(sweeps == 30);
  }
}

TEST_CASE("swapping the classes swaps every output exactly", "[inference][property]") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = oracle::random_graph(rng, 30, 0.3);
    if (g.node_count() < 5) continue;
    const auto h = swapped(g);
    const auto seeds = sample(g, {SamplingMethod::kNodes, 0.4, std::uint64_t(trial)}).nodes;
    const auto mg = learn_relational(g, seeds);
    const auto mh = learn_relational(h, seeds);
    REQUIRE(mg.priors.prior[0] == mh.priors.prior[1]);
    for (std::size_t c = 0; c < 2; ++c)
      for (std::size_t l = 0; l < 2; ++l) REQUIRE(mg.cond[c][l] == mh.cond[1 - c][1 - l]);

    const auto pg = relaxation_label(g, seeds, mg);
    const auto ph = relaxation_label(h, seeds, mh);
    for (NodeId v = 0; v < g.node_count(); ++v) {
      REQUIRE(pg.p[v][0] == ph.p[v][1]);
      REQUIRE(pg.p[v][1] == ph.p[v][0]);
    }
  }
}

TEST_CASE("last sweep moves less than the blending bound", "[inference][property]") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = oracle::random_graph(rng, 40, 0.3);
    if (g.node_count() < 5) continue;
    const auto seeds = sample(g, {SamplingMethod::kNodes, 0.2, std::uint64_t(trial)}).nodes;
    const RelaxationParams params{40, 0.8, 0.9};
    std::vector<ClassDist> previous;
    double last_change = 0.0;
    relaxation_label(g, seeds, learn_relational(g, seeds), params,
                     [&](int, const Posteriors& post) {
                       if (!previous.empty()) {
                         last_change = 0.0;
                         for (std::size_t v = 0; v < post.p.size(); ++v) {
                           last_change = std::max(last_change,
                                                  std::abs(post.p[v][0] - previous[v][0]) +
                                                      std::abs(post.p[v][1] - previous[v][1]));
                         }
                       }
                       previous = post.p;
                     });
    REQUIRE(last_change < params.beta0 * std::pow(params.decay, params.iterations - 1) * 2);
  }
}

TEST_CASE("pure networks are recovered from seed neighborhoods", "[inference]") {
  for (double h : {0.0, 1.0}) {
    const auto g = generate({400, 4, h, 0.5, 17});
    const auto seeds = sample(g, {SamplingMethod::kDegreeDesc, 0.3, 0}).nodes;
    const auto post = relaxation_label(g, seeds, learn_relational(g, seeds));
    std::size_t wrong = 0, tested = 0;
    std::vector<char> is_seed(g.node_count(), 0);
    for (auto s : seeds) is_seed[s] = 1;
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (is_seed[v]) continue;
      bool touches_seed = false;
      for (auto u : g.neighbors(v)) touches_seed |= is_seed[u] != 0;
      if (!touches_seed) continue;
      ++tested;
      wrong += predict(post.p[v]) != g.label(v);
    }
    CHECK(tested > 0);
    CHECK(wrong == 0);
  }
}
