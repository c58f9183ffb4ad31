#pragma once

// Homophilic preferential attachment: an arriving node
// j attaches to m distinct existing nodes, picking candidate i with
// probability proportional to h(class_i, class_j) * degree_i.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "netinfer/error.hpp"
#include "netinfer/graph.hpp"
#include "netinfer/random.hpp"

namespace netinfer {

struct GeneratorConfig {
  std::size_t nodes = 2000;
  std::size_t edges_per_node = 4;  // m
  double homophily = 0.5;          // h_00 = h_11 = H, h_01 = h_10 = 1 - H
  double minority_fraction = 0.5;  // fraction of class-1 nodes
  std::uint64_t seed = 0;

  void validate() const {
    if (edges_per_node < 1) throw InputError("m must be >= 1");
    if (nodes <= edges_per_node) throw InputError("N must exceed m");
    if (!(homophily >= 0.0 && homophily <= 1.0)) {
      throw InputError("homophily must lie in [0, 1]");
    }
    if (!(minority_fraction > 0.0 && minority_fraction <= 0.5)) {
      throw InputError("minority fraction must lie in (0, 0.5]");
    }
  }

  // h(a, b) of the homophily matrix.
  double mixing(Label a, Label b) const noexcept {
    return a == b ? homophily : 1.0 - homophily;
  }

  std::size_t expected_edges() const noexcept {
    return (nodes - edges_per_node) * edges_per_node;
  }
};

// Unnormalized attachment weight of candidate i (class_i, degree k_i) for an
// arriving node of class_j.
inline double target_weight(const GeneratorConfig& cfg, Label class_j,
                            Label class_i, std::size_t k_i) noexcept {
  return cfg.mixing(class_i, class_j) * static_cast<double>(k_i);
}

namespace detail {

// Class of every node in arrival order. The first m nodes alternate classes
// (while the minority budget lasts); the remainder is a seeded permutation.
inline std::vector<Label> arrival_classes(const GeneratorConfig& cfg, Rng& rng) {
  const auto n = cfg.nodes;
  auto ones = static_cast<std::size_t>(
      std::llround(cfg.minority_fraction * static_cast<double>(n)));
  ones = std::min(ones, n);
  std::size_t zeros = n - ones;

  std::vector<Label> out;
  out.reserve(n);
  for (std::size_t i = 0; i < cfg.edges_per_node; ++i) {
    const bool want_one = (i % 2 == 1);
    if ((want_one && ones > 0) || zeros == 0) {
      out.push_back(Label::kOne);
      --ones;
    } else {
      out.push_back(Label::kZero);
      --zeros;
    }
  }
  std::vector<Label> rest;
  rest.reserve(zeros + ones);
  rest.insert(rest.end(), zeros, Label::kZero);
  rest.insert(rest.end(), ones, Label::kOne);
  shuffle(std::span<Label>(rest), rng);
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

}  // namespace detail

/// Grows a network of cfg.nodes nodes. Node ids equal arrival order. The
/// first m nodes start without edges, every later node adds exactly m edges,
/// so the result always has (N - m) * m edges.
///
/// When every remaining candidate weight is zero the draw falls back first to
/// h * 1 (ignore degree), then to uniform over the remaining candidates.
/// Pure H in {0, 1} therefore produces a few cross-rule edges while fewer
/// than m eligible nodes exist.
inline AttributedGraph generate(const GeneratorConfig& cfg) {
  cfg.validate();
  auto rng = make_rng(cfg.seed);
  const auto n = cfg.nodes;
  const auto m = cfg.edges_per_node;

  auto classes = detail::arrival_classes(cfg, rng);
  std::vector<std::size_t> degree(n, 0);
  std::vector<Edge> edges;
  edges.reserve(cfg.expected_edges());

  std::vector<double> weight(n, 0.0);
  std::vector<char> taken(n, 0);
  std::vector<NodeId> chosen;
  chosen.reserve(m);

  auto refill = [&](std::size_t j, auto&& w) {
    double total = 0.0;
    for (std::size_t i = 0; i < j; ++i) {
      weight[i] = taken[i] ? 0.0 : w(i);
      total += weight[i];
    }
    return total;
  };

  for (std::size_t j = m; j < n; ++j) {
    const Label cj = classes[j];
    chosen.clear();
    auto by_degree = [&](std::size_t i) {
      return target_weight(cfg, cj, classes[i], degree[i]);
    };
    double total = refill(j, by_degree);

    for (std::size_t draw = 0; draw < m; ++draw) {
      if (!(total > 0.0)) {
        total = refill(j, [&](std::size_t i) { return cfg.mixing(classes[i], cj); });
      }
      if (!(total > 0.0)) {
        total = refill(j, [](std::size_t) { return 1.0; });
      }
      const double r = uniform01(rng) * total;
      double acc = 0.0;
      std::size_t pick = j;
      std::size_t last_positive = j;
      for (std::size_t i = 0; i < j; ++i) {
        if (weight[i] <= 0.0) continue;
        last_positive = i;
        acc += weight[i];
        if (r < acc) {
          pick = i;
          break;
        }
      }
      if (pick == j) pick = last_positive;  // rounding at the top end
      taken[pick] = 1;
      chosen.push_back(static_cast<NodeId>(pick));
      weight[pick] = 0.0;
      // Recompute rather than subtract so drift never leaves a phantom mass.
      total = 0.0;
      for (std::size_t i = 0; i < j; ++i) total += weight[i];
    }

    for (NodeId i : chosen) {
      edges.push_back({i, static_cast<NodeId>(j)});
      ++degree[i];
      taken[i] = 0;
    }
    degree[j] += m;
  }

  return AttributedGraph(std::move(classes), edges);
}

}  // namespace netinfer
