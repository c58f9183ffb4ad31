#pragma once

// Network-only Bayes relational classifier with relaxation-labelling
// collective inference.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "netinfer/error.hpp"
#include "netinfer/graph.hpp"

namespace netinfer {

using ClassDist = std::array<double, 2>;

struct ClassPriors {
  ClassDist prior{0.5, 0.5};
};

struct RelationalModel {
  // cond[c][l] = P(neighbor has label l | node has label c), Laplace smoothed.
  std::array<ClassDist, 2> cond{{{0.5, 0.5}, {0.5, 0.5}}};
  ClassPriors priors;
};

struct RelaxationParams {
  int iterations = 100;
  double beta0 = 1.0;
  double decay = 0.99;

  void validate() const {
    if (iterations < 1) throw InputError("relaxation iterations must be >= 1");
    if (!(decay > 0.0 && decay < 1.0)) throw InputError("decay must lie in (0, 1)");
    if (!(beta0 > 0.0 && beta0 <= 1.0)) throw InputError("beta0 must lie in (0, 1]");
  }
};

struct Posteriors {
  std::vector<ClassDist> p;
  std::vector<char> frozen;  // 1 for seed nodes
};

namespace detail {

inline std::vector<char> seed_mask(const AttributedGraph& g,
                                   std::span<const NodeId> seeds) {
  std::vector<char> mask(g.node_count(), 0);
  for (NodeId v : seeds) {
    if (v >= g.node_count()) throw InputError("seed id " + std::to_string(v) + " not in graph");
    mask[v] = 1;
  }
  return mask;
}

}  // namespace detail

/// Class priors from seed labels with add-one smoothing.
inline ClassPriors learn_local(const AttributedGraph& g, std::span<const NodeId> seeds) {
  if (seeds.empty()) throw InputError("cannot learn class priors from an empty seed set");
  const auto mask = detail::seed_mask(g, seeds);
  std::array<double, 2> count{0.0, 0.0};
  double total = 0.0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (!mask[v]) continue;
    count[index(g.label(v))] += 1.0;
    total += 1.0;
  }
  return {{(count[0] + 1.0) / (total + 2.0), (count[1] + 1.0) / (total + 2.0)}};
}

/// Neighbor-label conditionals from edges whose endpoints are both seeds.
/// Each undirected edge contributes once per direction. Smoothing keeps every
/// entry strictly inside (0, 1), so an edgeless sample yields uniform rows.
inline RelationalModel learn_relational(const AttributedGraph& g,
                                        std::span<const NodeId> seeds) {
  if (seeds.empty()) throw InputError("cannot learn a relational model from an empty seed set");
  const auto mask = detail::seed_mask(g, seeds);
  std::array<std::array<double, 2>, 2> n{};
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (!mask[u]) continue;
    for (NodeId v : g.neighbors(u)) {
      if (mask[v]) n[index(g.label(u))][index(g.label(v))] += 1.0;
    }
  }
  RelationalModel model;
  for (std::size_t c = 0; c < 2; ++c) {
    const double row = n[c][0] + n[c][1];
    model.cond[c] = {(n[c][0] + 1.0) / (row + 2.0), (n[c][1] + 1.0) / (row + 2.0)};
  }
  model.priors = learn_local(g, seeds);
  return model;
}

// Called after every sweep with the 1-based iteration number.
using RelaxationObserver = std::function<void(int, const Posteriors&)>;

/// Relaxation labelling. Seeds are clamped to their true label; other nodes
/// start at the priors. Each sweep computes, for every unlabelled node, the
/// NBC score in log space using the neighbors' previous estimates as soft
/// evidence, normalizes it, and blends it into the previous estimate with
/// weight beta0 * decay^(t-1). Updates are synchronous. Unlabelled nodes
/// without edges keep the priors.
inline Posteriors relaxation_label(const AttributedGraph& g,
                                   std::span<const NodeId> seeds,
                                   const RelationalModel& model,
                                   const RelaxationParams& params = {},
                                   const RelaxationObserver& observer = {}) {
  params.validate();
  const auto n = g.node_count();
  Posteriors post;
  post.frozen = detail::seed_mask(g, seeds);
  post.p.assign(n, model.priors.prior);
  for (NodeId v = 0; v < n; ++v) {
    if (post.frozen[v]) {
      post.p[v] = g.label(v) == Label::kZero ? ClassDist{1.0, 0.0} : ClassDist{0.0, 1.0};
    }
  }

  std::array<ClassDist, 2> log_cond;
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t l = 0; l < 2; ++l) log_cond[c][l] = std::log(model.cond[c][l]);
  }
  const ClassDist log_prior{std::log(model.priors.prior[0]),
                            std::log(model.priors.prior[1])};

  std::vector<ClassDist> next = post.p;
  double beta = params.beta0;
  for (int t = 1; t <= params.iterations; ++t) {
    for (NodeId i = 0; i < n; ++i) {
      if (post.frozen[i] || g.degree(i) == 0) continue;
      ClassDist s = log_prior;
      for (NodeId j : g.neighbors(i)) {
        const auto& pj = post.p[j];
        for (std::size_t c = 0; c < 2; ++c) {
          s[c] += pj[0] * log_cond[c][0] + pj[1] * log_cond[c][1];
        }
      }
      // Two-class softmax written so that swapping the classes swaps the
      // result bit for bit.
      const ClassDist m{1.0 / (1.0 + std::exp(s[1] - s[0])),
                        1.0 / (1.0 + std::exp(s[0] - s[1]))};
      const auto& prev = post.p[i];
      ClassDist blended{beta * m[0] + (1.0 - beta) * prev[0],
                        beta * m[1] + (1.0 - beta) * prev[1]};
      const double z = blended[0] + blended[1];
      next[i] = {blended[0] / z, blended[1] / z};
    }
    // Skipped rows are constant, so both buffers already agree on them.
    post.p.swap(next);
    if (observer) observer(t, post);
    beta *= params.decay;
  }
  return post;
}

// Most probable class; an exact tie goes to class 0.
inline Label predict(const ClassDist& row) noexcept {
  return row[1] > row[0] ? Label::kOne : Label::kZero;
}

inline std::vector<Label> predict(const Posteriors& post) {
  std::vector<Label> out(post.p.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = predict(post.p[i]);
  return out;
}

}  // namespace netinfer
