#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "netinfer/error.hpp"
#include "netinfer/graph.hpp"

namespace netinfer {

// std::nullopt marks a statistic that is undefined for the input.
using Stat = std::optional<double>;

struct StructuralReport {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  double density = 0.0;
  double avg_degree = 0.0;
  Stat homophily;
  double balance = 0.0;  // majority-class fraction
  Stat degree_assortativity;
  Stat attribute_assortativity;
  double clustering = 0.0;
};

namespace detail {

// Pearson correlation over (x_u, x_v) for both orientations of every edge.
template <class Value>
Stat edge_pearson(const AttributedGraph& g, Value value) {
  if (g.edge_count() == 0) return std::nullopt;
  double sum = 0.0, sum_sq = 0.0, sum_xy = 0.0;
  double count = 0.0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    const double xu = value(u);
    for (NodeId v : g.neighbors(u)) {
      const double xv = value(v);
      sum += xu;
      sum_sq += xu * xu;
      sum_xy += xu * xv;
      count += 1.0;
    }
  }
  const double mean = sum / count;
  const double var = sum_sq / count - mean * mean;
  if (!(var > 1e-15 * std::max(1.0, sum_sq / count))) return std::nullopt;
  return (sum_xy / count - mean * mean) / var;
}

}  // namespace detail

inline StructuralReport structural(const AttributedGraph& g) {
  const auto n = g.node_count();
  if (n < 2) throw InputError("structural statistics need at least 2 nodes");
  StructuralReport r;
  r.nodes = n;
  r.edges = g.edge_count();
  const double nn = static_cast<double>(n);
  const double e = static_cast<double>(r.edges);
  r.density = 2.0 * e / (nn * (nn - 1.0));
  r.avg_degree = 2.0 * e / nn;

  std::size_t ones = 0;
  for (auto c : g.labels()) ones += (c == Label::kOne);
  r.balance = static_cast<double>(std::max(ones, n - ones)) / nn;

  if (r.edges > 0) {
    std::size_t same = 0;
    for (const auto& edge : g.edges()) same += g.label(edge.u) == g.label(edge.v);
    r.homophily = static_cast<double>(same) / e;
  }
  r.degree_assortativity = detail::edge_pearson(
      g, [&](NodeId v) { return static_cast<double>(g.degree(v)); });
  r.attribute_assortativity = detail::edge_pearson(
      g, [&](NodeId v) { return static_cast<double>(index(g.label(v))); });

  // Mean local clustering; nodes with degree < 2 contribute 0.
  double total = 0.0;
  std::vector<char> mark(n, 0);
  for (NodeId v = 0; v < n; ++v) {
    const auto nb = g.neighbors(v);
    const auto k = nb.size();
    if (k < 2) continue;
    for (NodeId u : nb) mark[u] = 1;
    std::size_t links = 0;
    for (NodeId u : nb) {
      for (NodeId w : g.neighbors(u)) links += mark[w];
    }
    for (NodeId u : nb) mark[u] = 0;
    // Every triangle edge was seen from both ends.
    total += static_cast<double>(links) / static_cast<double>(k * (k - 1));
  }
  r.clustering = total / nn;
  return r;
}

/// Mann-Whitney AUC with midranks: the probability that a random class-1
/// item outscores a random class-0 item, ties counting one half. Undefined
/// unless both classes are present.
inline Stat roc_auc(std::span<const double> scores, std::span<const Label> truth) {
  if (scores.size() != truth.size()) throw InputError("scores and labels differ in length");
  const auto n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double rank_sum = 0.0;
  double positives = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);  // mean of ranks i+1..j
    for (std::size_t k = i; k < j; ++k) {
      if (truth[order[k]] == Label::kOne) {
        rank_sum += midrank;
        positives += 1.0;
      }
    }
    i = j;
  }
  const double negatives = static_cast<double>(n) - positives;
  if (positives == 0.0 || negatives == 0.0) return std::nullopt;
  return (rank_sum - positives * (positives + 1.0) / 2.0) / (positives * negatives);
}

/// Fraction of misclassified items per true class; undefined for an absent class.
inline std::array<Stat, 2> per_class_error(std::span<const Label> predicted,
                                           std::span<const Label> truth) {
  if (predicted.size() != truth.size()) throw InputError("predictions and labels differ in length");
  std::array<double, 2> wrong{0.0, 0.0}, total{0.0, 0.0};
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto c = index(truth[i]);
    total[c] += 1.0;
    wrong[c] += predicted[i] != truth[i];
  }
  std::array<Stat, 2> out;
  for (std::size_t c = 0; c < 2; ++c) {
    if (total[c] > 0.0) out[c] = wrong[c] / total[c];
  }
  return out;
}

struct ClassificationReport {
  Stat roc_auc;
  std::array<Stat, 2> error_per_class;
  Stat overall_error;  // misclassified / n_test, i.e. class errors weighted by size
  std::size_t n_test = 0;
};

inline ClassificationReport classification_report(std::span<const double> score_one,
                                                  std::span<const Label> predicted,
                                                  std::span<const Label> truth) {
  ClassificationReport r;
  r.n_test = truth.size();
  r.roc_auc = roc_auc(score_one, truth);
  r.error_per_class = per_class_error(predicted, truth);
  if (!truth.empty()) {
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) wrong += predicted[i] != truth[i];
    r.overall_error = static_cast<double>(wrong) / static_cast<double>(truth.size());
  }
  return r;
}

}  // namespace netinfer
