#pragma once

// Reference implementations used only by tests. They take deliberately
// different routes from the library code: all-pairs counting instead of
// ranks, Floyd-Warshall instead of per-node BFS, a dense matrix power
// iteration instead of the sparse push.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "netinfer/graph.hpp"

namespace oracle {

using netinfer::AttributedGraph;
using netinfer::Edge;
using netinfer::Label;
using netinfer::NodeId;

// P(score of a class-1 item > score of a class-0 item) + 0.5 P(tie).
inline double pairwise_auc(const std::vector<double>& scores, const std::vector<Label>& truth) {
  double wins = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (truth[i] != Label::kOne) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (truth[j] != Label::kZero) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) wins += 1.0;
      else if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

inline std::vector<std::vector<int>> all_pairs_hops(const AttributedGraph& g) {
  const auto n = g.node_count();
  const int inf = 1 << 28;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : g.edges()) d[e.u][e.v] = d[e.v][e.u] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

inline std::vector<std::int64_t> collective_influence(const AttributedGraph& g, int radius) {
  const auto n = g.node_count();
  const auto d = all_pairs_hops(g);
  std::vector<std::int64_t> ci(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ki = static_cast<std::int64_t>(g.degree(static_cast<NodeId>(i)));
    if (ki == 0) continue;
    std::int64_t sum = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (d[i][j] == radius) sum += static_cast<std::int64_t>(g.degree(static_cast<NodeId>(j))) - 1;
    }
    ci[i] = (ki - 1) * sum;
  }
  return ci;
}

// Google matrix G = d * (A D^-1 with dangling columns 1/n) + (1 - d) / n,
// iterated densely to a fixed point.
inline std::vector<double> dense_pagerank(const AttributedGraph& g, double damping,
                                          int sweeps = 5000) {
  const auto n = g.node_count();
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    const auto k = g.degree(static_cast<NodeId>(j));
    for (std::size_t i = 0; i < n; ++i) {
      double col = k == 0 ? 1.0 / static_cast<double>(n)
                          : (g.has_edge(static_cast<NodeId>(i), static_cast<NodeId>(j))
                                 ? 1.0 / static_cast<double>(k)
                                 : 0.0);
      m[i][j] = damping * col + (1.0 - damping) / static_cast<double>(n);
    }
  }
  std::vector<double> x(n, 1.0 / static_cast<double>(n)), y(n);
  for (int s = 0; s < sweeps; ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += m[i][j] * x[j];
      y[i] = acc;
    }
    x.swap(y);
  }
  return x;
}

// Erdos-Renyi style random graph with random labels.
inline AttributedGraph random_graph(std::mt19937_64& rng, std::size_t max_nodes,
                                    double max_edge_prob = 0.4) {
  std::uniform_int_distribution<std::size_t> size(1, max_nodes);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto n = size(rng);
  const double p = u(rng) * max_edge_prob;
  std::vector<Label> labels(n);
  for (auto& l : labels) l = u(rng) < 0.5 ? Label::kZero : Label::kOne;
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j)
      if (u(rng) < p) edges.push_back({i, j});
  return AttributedGraph(std::move(labels), edges);
}

}  // namespace oracle
