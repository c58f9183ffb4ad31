#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netinfer/error.hpp"
#include "netinfer/graph.hpp"
#include "netinfer/random.hpp"

namespace netinfer {

enum class SamplingMethod {
  kNodes,
  kNedges,
  kSnowball,
  kDegreeAsc,
  kDegreeDesc,
  kDegreeMix,
  kPagerankAsc,
  kPagerankDesc,
  kPercolationAsc,
  kPercolationDesc,
};

inline constexpr std::array<SamplingMethod, 10> kAllMethods = {
    SamplingMethod::kNodes,          SamplingMethod::kNedges,
    SamplingMethod::kSnowball,       SamplingMethod::kDegreeAsc,
    SamplingMethod::kDegreeDesc,     SamplingMethod::kDegreeMix,
    SamplingMethod::kPagerankAsc,    SamplingMethod::kPagerankDesc,
    SamplingMethod::kPercolationAsc, SamplingMethod::kPercolationDesc,
};

inline constexpr std::string_view name(SamplingMethod m) noexcept {
  switch (m) {
    case SamplingMethod::kNodes: return "nodes";
    case SamplingMethod::kNedges: return "nedges";
    case SamplingMethod::kSnowball: return "snowball";
    case SamplingMethod::kDegreeAsc: return "degreeASC";
    case SamplingMethod::kDegreeDesc: return "degreeDESC";
    case SamplingMethod::kDegreeMix: return "degreeMIX";
    case SamplingMethod::kPagerankAsc: return "pagerankASC";
    case SamplingMethod::kPagerankDesc: return "pagerankDESC";
    case SamplingMethod::kPercolationAsc: return "percolationASC";
    case SamplingMethod::kPercolationDesc: return "percolationDESC";
  }
  return "?";
}

inline SamplingMethod parse_method(std::string_view s) {
  for (auto m : kAllMethods) {
    if (name(m) == s) return m;
  }
  throw InputError("unknown sampling method '" + std::string(s) + "'");
}

struct SamplerSpec {
  SamplingMethod method = SamplingMethod::kNodes;
  double fraction = 0.1;  // p
  std::uint64_t seed = 0;
  int ci_radius = 2;
  double pagerank_damping = 0.85;
  double pagerank_tol = 1e-8;

  void validate() const {
    if (!(fraction > 0.0 && fraction <= 1.0)) {
      throw InputError("sample fraction must lie in (0, 1]");
    }
    if (ci_radius < 1) throw InputError("collective influence radius must be >= 1");
    if (!(pagerank_damping > 0.0 && pagerank_damping < 1.0)) {
      throw InputError("pagerank damping must lie in (0, 1)");
    }
    if (!(pagerank_tol > 0.0)) throw InputError("pagerank tolerance must be > 0");
  }
};

struct SeedSet {
  std::vector<NodeId> nodes;  // sorted ascending
  SamplerSpec spec;
};

/// PageRank by power iteration, each undirected edge read as two arcs.
/// Mass on degree-0 nodes is spread uniformly. Stops once the L1 change
/// between sweeps drops below tol.
inline std::vector<double> pagerank(const AttributedGraph& g, double damping = 0.85,
                                    double tol = 1e-8,
                                    std::size_t max_iterations = 10000) {
  const auto n = g.node_count();
  if (n == 0) return {};
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> rank(n, inv_n), next(n);
  for (std::size_t it = 0; it < max_iterations; ++it) {
    double dangling = 0.0;
    for (NodeId v = 0; v < n; ++v) {
      if (g.degree(v) == 0) dangling += rank[v];
    }
    const double base = (1.0 - damping) * inv_n + damping * dangling * inv_n;
    for (NodeId v = 0; v < n; ++v) {
      double in = 0.0;
      for (NodeId u : g.neighbors(v)) {
        in += rank[u] / static_cast<double>(g.degree(u));
      }
      next[v] = base + damping * in;
    }
    double delta = 0.0;
    for (std::size_t v = 0; v < n; ++v) delta += std::abs(next[v] - rank[v]);
    rank.swap(next);
    if (delta < tol) break;
  }
  return rank;
}

/// Collective influence CI_l(i) = (k_i - 1) * sum of (k_j - 1) over nodes j at
/// shortest-path distance exactly `radius` from i. Isolated nodes score 0.
inline std::vector<std::int64_t> collective_influence(const AttributedGraph& g,
                                                      int radius = 2) {
  if (radius < 1) throw InputError("collective influence radius must be >= 1");
  const auto n = g.node_count();
  std::vector<std::int64_t> ci(n, 0);
  std::vector<int> dist(n, -1);
  std::vector<NodeId> frontier, next, touched;
  for (NodeId i = 0; i < n; ++i) {
    const auto ki = static_cast<std::int64_t>(g.degree(i));
    if (ki <= 1) continue;
    frontier.assign(1, i);
    touched.assign(1, i);
    dist[i] = 0;
    for (int d = 1; d <= radius && !frontier.empty(); ++d) {
      next.clear();
      for (NodeId u : frontier) {
        for (NodeId v : g.neighbors(u)) {
          if (dist[v] < 0) {
            dist[v] = d;
            next.push_back(v);
            touched.push_back(v);
          }
        }
      }
      frontier.swap(next);
    }
    std::int64_t boundary = 0;
    if (!frontier.empty() && dist[frontier.front()] == radius) {
      for (NodeId j : frontier) boundary += static_cast<std::int64_t>(g.degree(j)) - 1;
    }
    ci[i] = (ki - 1) * boundary;
    for (NodeId v : touched) dist[v] = -1;
  }
  return ci;
}

namespace detail {

// Node ids ordered by score; ties broken by ascending id in both directions.
template <class Score>
std::vector<NodeId> rank_nodes(const std::vector<Score>& score, bool descending) {
  std::vector<NodeId> order(score.size());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    return descending ? score[a] > score[b] : score[a] < score[b];
  });
  return order;
}

inline std::vector<std::size_t> degrees(const AttributedGraph& g) {
  std::vector<std::size_t> d(g.node_count());
  for (NodeId v = 0; v < d.size(); ++v) d[v] = g.degree(v);
  return d;
}

// Insertion-ordered set of picked nodes with LIFO trimming.
class Picker {
 public:
  explicit Picker(std::size_t n) : in_(n, 0) {}
  bool add(NodeId v) {
    if (in_[v]) return false;
    in_[v] = 1;
    order_.push_back(v);
    return true;
  }
  bool contains(NodeId v) const { return in_[v] != 0; }
  std::size_t size() const { return order_.size(); }
  std::vector<NodeId> finish(std::size_t target) {
    while (order_.size() > target) {
      in_[order_.back()] = 0;
      order_.pop_back();
    }
    std::sort(order_.begin(), order_.end());
    return std::move(order_);
  }

 private:
  std::vector<char> in_;
  std::vector<NodeId> order_;
};

inline std::vector<NodeId> take_ranked(const std::vector<NodeId>& order,
                                       std::size_t target) {
  std::vector<NodeId> out(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(target));
  std::sort(out.begin(), out.end());
  return out;
}

// Uniform pick among nodes not yet in the picker; fills up to `target`.
inline void fill_uniform(Picker& picked, std::size_t n, std::size_t target, Rng& rng) {
  if (picked.size() >= target) return;
  std::vector<NodeId> rest;
  for (NodeId v = 0; v < n; ++v) {
    if (!picked.contains(v)) rest.push_back(v);
  }
  shuffle(std::span<NodeId>(rest), rng);
  for (std::size_t i = 0; picked.size() < target; ++i) picked.add(rest[i]);
}

inline std::vector<NodeId> sample_nodes(std::size_t n, std::size_t target, Rng& rng) {
  std::vector<NodeId> all(n);
  std::iota(all.begin(), all.end(), NodeId{0});
  // Partial Fisher-Yates: the first `target` slots are a uniform sample.
  for (std::size_t i = 0; i < target; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_index(rng, n - i));
    std::swap(all[i], all[j]);
  }
  all.resize(target);
  std::sort(all.begin(), all.end());
  return all;
}

inline std::vector<NodeId> sample_nedges(const AttributedGraph& g, std::size_t target,
                                         Rng& rng) {
  auto edges = g.edges();
  Picker picked(g.node_count());
  for (std::size_t i = 0; i < edges.size() && picked.size() < target; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_index(rng, edges.size() - i));
    std::swap(edges[i], edges[j]);
    picked.add(edges[i].u);
    picked.add(edges[i].v);
  }
  // Edges ran out before the quota (isolated nodes): top up uniformly.
  fill_uniform(picked, g.node_count(), target, rng);
  return picked.finish(target);
}

inline std::vector<NodeId> sample_snowball(const AttributedGraph& g, std::size_t target,
                                           Rng& rng) {
  const auto n = g.node_count();
  Picker picked(n);
  std::vector<NodeId> queue;
  while (picked.size() < target) {
    // Restart from a uniform random node not yet collected.
    auto k = uniform_index(rng, n - picked.size());
    NodeId start = 0;
    for (NodeId v = 0; v < n; ++v) {
      if (picked.contains(v)) continue;
      if (k-- == 0) {
        start = v;
        break;
      }
    }
    queue.assign(1, start);
    picked.add(start);
    // BFS order equals whole layers appended in ascending-id order; stopping
    // at the quota is the same as appending the layer and trimming LIFO.
    for (std::size_t head = 0; head < queue.size() && picked.size() < target; ++head) {
      for (NodeId v : g.neighbors(queue[head])) {
        if (picked.size() >= target) break;
        if (picked.add(v)) queue.push_back(v);
      }
    }
  }
  return picked.finish(target);
}

inline std::vector<NodeId> sample_mix(const std::vector<std::size_t>& deg,
                                      std::size_t target) {
  const auto desc = rank_nodes(deg, true);
  const auto asc = rank_nodes(deg, false);
  Picker picked(deg.size());
  const std::size_t high = (target + 1) / 2;
  for (std::size_t i = 0; picked.size() < high; ++i) picked.add(desc[i]);
  for (std::size_t i = 0; picked.size() < target; ++i) picked.add(asc[i]);
  return picked.finish(target);
}

}  // namespace detail

// ceil(p * N), with a small slack so 0.3 * 10 does not round up to 4.
inline std::size_t sample_size(double fraction, std::size_t n) {
  const double raw = fraction * static_cast<double>(n);
  return static_cast<std::size_t>(std::ceil(raw - 1e-9 * std::max(1.0, raw)));
}

// Rank scores computed once per graph and shared by many sample() calls.
// They must have been computed with the damping/tol/radius of the spec.
struct NodeScores {
  std::optional<std::vector<double>> pagerank;
  std::optional<std::vector<std::int64_t>> influence;
};

/// Draws exactly ceil(p * N) seed nodes with the requested strategy.
/// Rank-based strategies use no randomness; ties go to the lower node id.
inline SeedSet sample(const AttributedGraph& g, const SamplerSpec& spec,
                      const NodeScores* precomputed = nullptr) {
  spec.validate();
  const auto n = g.node_count();
  if (n < 2) throw InputError("sampling needs at least 2 nodes");
  if (spec.fraction * static_cast<double>(n) < 1.0 - 1e-9) {
    throw InputError("sample would be empty (p * N < 1)");
  }
  const auto target = sample_size(spec.fraction, n);

  auto rng = make_rng(spec.seed);
  SeedSet out{{}, spec};
  switch (spec.method) {
    case SamplingMethod::kNodes:
      out.nodes = detail::sample_nodes(n, target, rng);
      break;
    case SamplingMethod::kNedges:
      out.nodes = detail::sample_nedges(g, target, rng);
      break;
    case SamplingMethod::kSnowball:
      out.nodes = detail::sample_snowball(g, target, rng);
      break;
    case SamplingMethod::kDegreeAsc:
    case SamplingMethod::kDegreeDesc:
      out.nodes = detail::take_ranked(
          detail::rank_nodes(detail::degrees(g),
                             spec.method == SamplingMethod::kDegreeDesc),
          target);
      break;
    case SamplingMethod::kDegreeMix:
      out.nodes = detail::sample_mix(detail::degrees(g), target);
      break;
    case SamplingMethod::kPagerankAsc:
    case SamplingMethod::kPagerankDesc:
      out.nodes = detail::take_ranked(
          detail::rank_nodes(precomputed && precomputed->pagerank
                                 ? *precomputed->pagerank
                                 : pagerank(g, spec.pagerank_damping, spec.pagerank_tol),
                             spec.method == SamplingMethod::kPagerankDesc),
          target);
      break;
    case SamplingMethod::kPercolationAsc:
    case SamplingMethod::kPercolationDesc:
      out.nodes = detail::take_ranked(
          detail::rank_nodes(precomputed && precomputed->influence
                                 ? *precomputed->influence
                                 : collective_influence(g, spec.ci_radius),
                             spec.method == SamplingMethod::kPercolationDesc),
          target);
      break;
  }
  return out;
}

}  // namespace netinfer
