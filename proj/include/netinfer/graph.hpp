#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "netinfer/error.hpp"

namespace netinfer {

using NodeId = std::uint32_t;

// Binary class attribute carried by every node.
enum class Label : std::uint8_t { kZero = 0, kOne = 1 };

inline constexpr std::size_t index(Label c) noexcept {
  return static_cast<std::size_t>(c);
}
inline constexpr Label flip(Label c) noexcept {
  return c == Label::kZero ? Label::kOne : Label::kZero;
}
inline constexpr Label label_from_index(std::size_t i) noexcept {
  return i == 0 ? Label::kZero : Label::kOne;
}

struct Edge {
  NodeId u;
  NodeId v;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected, unweighted, simple graph with one binary label per node.
///
/// Adjacency is stored in CSR form with each neighbor list sorted ascending,
/// so every traversal order is a function of the input alone. Instances are
/// immutable after construction and safe to share across threads.
class AttributedGraph {
 public:
  AttributedGraph() = default;

  /// Builds the graph from labels (one per node) and an edge list.
  /// Self-loops and out-of-range endpoints throw InputError; duplicate edges
  /// (in either orientation) are collapsed and counted in duplicates_collapsed().
  AttributedGraph(std::vector<Label> labels, std::span<const Edge> edges)
      : labels_(std::move(labels)) {
    const auto n = labels_.size();
    std::vector<Edge> canon;
    canon.reserve(edges.size());
    for (const auto& e : edges) {
      if (e.u >= n || e.v >= n) {
        throw InputError("edge (" + std::to_string(e.u) + ", " +
                         std::to_string(e.v) + ") references a node outside [0, " +
                         std::to_string(n) + ")");
      }
      if (e.u == e.v) {
        throw InputError("self-loop on node " + std::to_string(e.u));
      }
      canon.push_back(e.u < e.v ? e : Edge{e.v, e.u});
    }
    std::sort(canon.begin(), canon.end());
    const auto last = std::unique(canon.begin(), canon.end());
    duplicates_ = static_cast<std::size_t>(canon.end() - last);
    canon.erase(last, canon.end());
    edge_count_ = canon.size();

    offsets_.assign(n + 1, 0);
    for (const auto& e : canon) {
      ++offsets_[e.u + 1];
      ++offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
    adjacency_.resize(2 * canon.size());
    // canon is sorted by (u, v). Filling all lower neighbors first and then
    // all upper neighbors leaves every list sorted without a per-node sort.
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const auto& e : canon) adjacency_[cursor[e.v]++] = e.u;
    for (const auto& e : canon) adjacency_[cursor[e.u]++] = e.v;
  }

  std::size_t node_count() const noexcept { return labels_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  std::size_t duplicates_collapsed() const noexcept { return duplicates_; }

  std::size_t degree(NodeId v) const {
    check(v);
    return offsets_[v + 1] - offsets_[v];
  }

  std::span<const NodeId> neighbors(NodeId v) const {
    check(v);
    return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }

  Label label(NodeId v) const {
    check(v);
    return labels_[v];
  }
  std::span<const Label> labels() const noexcept { return labels_; }

  bool has_edge(NodeId u, NodeId v) const {
    const auto nb = neighbors(u);
    check(v);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  // Each undirected edge once, as (u, v) with u < v, in ascending order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (NodeId u = 0; u < node_count(); ++u) {
      for (NodeId v : neighbors(u)) {
        if (u < v) out.push_back({u, v});
      }
    }
    return out;
  }

 private:
  void check(NodeId v) const {
    if (v >= labels_.size()) {
      throw InputError("node id " + std::to_string(v) + " out of range [0, " +
                       std::to_string(labels_.size()) + ")");
    }
  }

  std::vector<Label> labels_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> adjacency_;
  std::size_t edge_count_ = 0;
  std::size_t duplicates_ = 0;
};

struct InducedSubgraph {
  AttributedGraph graph;
  // original_id[new_id] is the id of that node in the parent graph.
  std::vector<NodeId> original_id;
};

/// Subgraph on the given nodes (duplicates ignored) keeping every edge with
/// both endpoints inside. New ids follow ascending original id.
inline InducedSubgraph induced_subgraph(const AttributedGraph& g,
                                        std::span<const NodeId> nodes) {
  const auto n = g.node_count();
  std::vector<NodeId> keep(nodes.begin(), nodes.end());
  for (NodeId v : keep) {
    if (v >= n) throw InputError("unknown node id " + std::to_string(v));
  }
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());

  constexpr auto kAbsent = static_cast<NodeId>(-1);
  std::vector<NodeId> remap(n, kAbsent);
  std::vector<Label> labels;
  labels.reserve(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    remap[keep[i]] = static_cast<NodeId>(i);
    labels.push_back(g.label(keep[i]));
  }
  std::vector<Edge> edges;
  for (NodeId u : keep) {
    for (NodeId v : g.neighbors(u)) {
      if (u < v && remap[v] != kAbsent) edges.push_back({remap[u], remap[v]});
    }
  }
  return {AttributedGraph(std::move(labels), edges), std::move(keep)};
}

}  // namespace netinfer
