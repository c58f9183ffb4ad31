#pragma once

// Experiment orchestration: one cell = sample -> learn -> relaxation labelling
// -> metrics on the unlabelled nodes. A sweep runs the cross product of
// networks x samplers x fractions x runs on a worker pool; every cell's seed is
// a hash of its coordinates, so output does not depend on scheduling.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "netinfer/error.hpp"
#include "netinfer/graph.hpp"
#include "netinfer/inference.hpp"
#include "netinfer/io.hpp"
#include "netinfer/metrics.hpp"
#include "netinfer/netgen.hpp"
#include "netinfer/random.hpp"
#include "netinfer/samplers.hpp"

namespace netinfer {

inline std::vector<double> default_homophily_grid() {
  std::vector<double> h;
  for (int i = 0; i <= 10; ++i) h.push_back(i / 10.0);
  return h;
}

inline std::vector<double> default_fractions() {
  std::vector<double> p{0.05};
  for (int i = 1; i <= 9; ++i) p.push_back(i / 10.0);
  return p;
}

// A family of generated networks, instantiated once per homophily value.
struct NetworkTemplate {
  std::string density_class = "sparse";  // sparse | dense
  std::size_t nodes = 2000;
  std::size_t edges_per_node = 4;
  double minority_fraction = 0.5;
  std::optional<std::uint64_t> seed;  // default: derived from base_seed
};

struct ExperimentConfig {
  std::vector<NetworkTemplate> generators;
  std::vector<std::string> graph_files;
  std::vector<double> homophily_grid = default_homophily_grid();
  std::vector<SamplingMethod> samplers{kAllMethods.begin(), kAllMethods.end()};
  SamplerSpec sampler_defaults;  // ci_radius, pagerank_damping, pagerank_tol
  std::vector<double> sample_fractions = default_fractions();
  int runs = 5;
  RelaxationParams relaxation;
  std::uint64_t base_seed = 0;
  std::string output_dir = "results";
  bool record_timing = false;
  unsigned threads = 0;  // 0 = auto; NETINFER_THREADS takes precedence

  void validate() const {
    if (runs < 1) throw InputError("runs must be >= 1");
    if (generators.empty() && graph_files.empty()) throw InputError("no networks configured");
    if (!generators.empty() && homophily_grid.empty()) throw InputError("homophily grid is empty");
    if (samplers.empty()) throw InputError("no samplers configured");
    if (sample_fractions.empty()) throw InputError("sample fraction grid is empty");
    for (double p : sample_fractions) {
      if (!(p > 0.0 && p < 1.0)) throw InputError("sample fractions must lie in (0, 1)");
    }
    for (const auto& t : generators) {
      if (t.density_class != "sparse" && t.density_class != "dense") {
        throw InputError("network class must be 'sparse' or 'dense', got '" +
                         t.density_class + "'");
      }
      for (double h : homophily_grid) {
        GeneratorConfig{t.nodes, t.edges_per_node, h, t.minority_fraction, 0}.validate();
      }
    }
    relaxation.validate();
    SamplerSpec probe = sampler_defaults;
    probe.fraction = 0.5;
    probe.validate();
  }
};

struct Network {
  std::string id;
  std::string density_class;  // sparse | dense | file
  Stat homophily_target;
  std::shared_ptr<const AttributedGraph> graph;
};

inline std::string network_id(const NetworkTemplate& t, double h) {
  return t.density_class + "-m" + std::to_string(t.edges_per_node) + "-H" + format_real(h);
}

/// Generates (or loads) every network named by the config.
inline std::vector<Network> build_networks(const ExperimentConfig& cfg,
                                           std::vector<std::string>* warnings = nullptr) {
  std::vector<Network> out;
  for (const auto& t : cfg.generators) {
    for (double h : cfg.homophily_grid) {
      auto id = network_id(t, h);
      GeneratorConfig gen{t.nodes, t.edges_per_node, h, t.minority_fraction,
                          t.seed.value_or(stable_hash(id, cfg.base_seed))};
      out.push_back({std::move(id), t.density_class, h,
                     std::make_shared<const AttributedGraph>(generate(gen))});
    }
  }
  for (const auto& path : cfg.graph_files) {
    auto loaded = load_graph(path);
    if (warnings) {
      for (auto& w : loaded.warnings) warnings->push_back(path + ": " + w);
    }
    out.push_back({std::filesystem::path(path).stem().string(), "file", std::nullopt,
                   std::make_shared<const AttributedGraph>(std::move(loaded.graph))});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Result rows

struct ResultRow {
  std::string network_id;
  Stat h_target;
  std::string density_class;
  std::string sampler;
  double p = 0.0;
  int run_index = 0;
  Stat roc_auc;
  Stat error_class0;
  Stat error_class1;
  Stat overall_error;
  Stat measured_h;
  Stat measured_b;
  std::optional<std::size_t> seed_edges;
  double wall_time_ms = 0.0;
  std::string status = "ok";  // anything else marks a failed cell

  bool ok() const { return status == "ok"; }
};

inline const std::vector<std::string>& result_columns() {
  static const std::vector<std::string> cols{
      "network_id",   "H_target",     "density_class", "sampler",
      "p",            "run_index",    "roc_auc",       "error_class0",
      "error_class1", "overall_error", "measured_H",   "measured_B",
      "seed_subgraph_edge_count", "wall_time_ms",      "status"};
  return cols;
}

inline std::vector<std::string> to_fields(const ResultRow& r) {
  return {r.network_id,
          format_real(r.h_target),
          r.density_class,
          r.sampler,
          format_real(r.p),
          std::to_string(r.run_index),
          format_real(r.roc_auc),
          format_real(r.error_class0),
          format_real(r.error_class1),
          format_real(r.overall_error),
          format_real(r.measured_h),
          format_real(r.measured_b),
          r.seed_edges ? std::to_string(*r.seed_edges) : "NA",
          format_real(r.wall_time_ms),
          r.status};
}

inline void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  write_csv_row(out, result_columns());
  for (const auto& r : rows) write_csv_row(out, to_fields(r));
}

namespace detail {

inline Stat parse_stat(const std::string& s, std::size_t line) {
  if (s == "NA" || s.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    double x = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    throw ParseError(line, "'" + s + "' is not a number");
  }
}

}  // namespace detail

inline std::vector<ResultRow> read_results_csv(std::istream& in) {
  auto table = read_csv(in);
  if (table.empty()) throw InputError("results file is empty");
  const auto& cols = result_columns();
  if (table[0] != cols) throw ParseError(1, "unexpected results header");
  std::vector<ResultRow> rows;
  for (std::size_t i = 1; i < table.size(); ++i) {
    const auto& f = table[i];
    const auto line = i + 1;
    if (f.size() == 1 && f[0].empty()) continue;
    if (f.size() != cols.size()) throw ParseError(line, "wrong number of columns");
    ResultRow r;
    r.network_id = f[0];
    r.h_target = detail::parse_stat(f[1], line);
    r.density_class = f[2];
    r.sampler = f[3];
    auto p = detail::parse_stat(f[4], line);
    auto run = detail::parse_stat(f[5], line);
    if (!p || !run) throw ParseError(line, "p and run_index are required");
    r.p = *p;
    r.run_index = static_cast<int>(*run);
    r.roc_auc = detail::parse_stat(f[6], line);
    r.error_class0 = detail::parse_stat(f[7], line);
    r.error_class1 = detail::parse_stat(f[8], line);
    r.overall_error = detail::parse_stat(f[9], line);
    r.measured_h = detail::parse_stat(f[10], line);
    r.measured_b = detail::parse_stat(f[11], line);
    if (auto e = detail::parse_stat(f[12], line)) r.seed_edges = static_cast<std::size_t>(*e);
    r.wall_time_ms = detail::parse_stat(f[13], line).value_or(0.0);
    r.status = f[14];
    rows.push_back(std::move(r));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Cells

// Per-network values shared by all of its cells.
struct CellContext {
  const NodeScores* scores = nullptr;
  Stat measured_h;
  Stat measured_b;
};

/// One train/test split and evaluation. spec.seed is the run seed. Input
/// errors (and a sample that leaves nothing to test) become an error-marked
/// row instead of an exception.
inline ResultRow run_cell(const AttributedGraph& g, const SamplerSpec& spec,
                          const RelaxationParams& relaxation,
                          const CellContext* ctx = nullptr, bool timing = false) {
  const auto start = std::chrono::steady_clock::now();
  ResultRow row;
  row.sampler = std::string(name(spec.method));
  row.p = spec.fraction;
  if (ctx) {
    row.measured_h = ctx->measured_h;
    row.measured_b = ctx->measured_b;
  } else if (g.node_count() >= 2) {
    const auto s = structural(g);
    row.measured_h = s.homophily;
    row.measured_b = s.balance;
  }
  try {
    const auto seeds = sample(g, spec, ctx ? ctx->scores : nullptr);
    row.seed_edges = induced_subgraph(g, seeds.nodes).graph.edge_count();
    if (seeds.nodes.size() == g.node_count()) throw InputError("empty test set");
    const auto model = learn_relational(g, seeds.nodes);
    const auto post = relaxation_label(g, seeds.nodes, model, relaxation);

    std::vector<double> score;
    std::vector<Label> predicted, truth;
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (post.frozen[v]) continue;
      score.push_back(post.p[v][1]);
      predicted.push_back(predict(post.p[v]));
      truth.push_back(g.label(v));
    }
    const auto report = classification_report(score, predicted, truth);
    row.roc_auc = report.roc_auc;
    row.error_class0 = report.error_per_class[0];
    row.error_class1 = report.error_per_class[1];
    row.overall_error = report.overall_error;
  } catch (const InputError& e) {
    row.status = std::string("error: ") + e.what();
  }
  if (timing) {
    row.wall_time_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  }
  return row;
}

inline std::uint64_t cell_seed(std::uint64_t base_seed, const std::string& network,
                               SamplingMethod method, double p, int run) {
  const auto key = network + '|' + std::string(name(method)) + '|' + format_real(p) + '|' +
                   std::to_string(run);
  return stable_hash(key, base_seed);
}

inline unsigned resolve_threads(unsigned configured) {
  unsigned n = configured;
  if (const char* env = std::getenv("NETINFER_THREADS"); env && *env) {
    char* end = nullptr;
    const auto v = std::strtoul(env, &end, 10);
    if (*end != '\0') throw InputError("NETINFER_THREADS must be a non-negative integer");
    n = static_cast<unsigned>(v);
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

/// Runs every cell. Row order is network, sampler, p, run regardless of the
/// number of workers.
inline std::vector<ResultRow> run_sweep(const ExperimentConfig& cfg,
                                        const std::vector<Network>& networks,
                                        unsigned threads) {
  struct Cell {
    std::size_t network;
    SamplingMethod method;
    double p;
    int run;
  };
  std::vector<Cell> cells;
  for (std::size_t ni = 0; ni < networks.size(); ++ni) {
    for (auto m : cfg.samplers) {
      for (double p : cfg.sample_fractions) {
        for (int r = 0; r < cfg.runs; ++r) cells.push_back({ni, m, p, r});
      }
    }
  }

  const bool need_pr = std::any_of(cfg.samplers.begin(), cfg.samplers.end(), [](auto m) {
    return m == SamplingMethod::kPagerankAsc || m == SamplingMethod::kPagerankDesc;
  });
  const bool need_ci = std::any_of(cfg.samplers.begin(), cfg.samplers.end(), [](auto m) {
    return m == SamplingMethod::kPercolationAsc || m == SamplingMethod::kPercolationDesc;
  });
  std::vector<NodeScores> scores(networks.size());
  std::vector<CellContext> contexts(networks.size());
  for (std::size_t i = 0; i < networks.size(); ++i) {
    const auto& g = *networks[i].graph;
    if (need_pr) {
      scores[i].pagerank =
          pagerank(g, cfg.sampler_defaults.pagerank_damping, cfg.sampler_defaults.pagerank_tol);
    }
    if (need_ci) scores[i].influence = collective_influence(g, cfg.sampler_defaults.ci_radius);
    const auto s = structural(g);
    contexts[i] = {&scores[i], s.homophily, s.balance};
  }

  std::vector<ResultRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const auto i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const auto& c = cells[i];
      const auto& net = networks[c.network];
      try {
        SamplerSpec spec = cfg.sampler_defaults;
        spec.method = c.method;
        spec.fraction = c.p;
        spec.seed = cell_seed(cfg.base_seed, net.id, c.method, c.p, c.run);
        auto row = run_cell(*net.graph, spec, cfg.relaxation, &contexts[c.network],
                            cfg.record_timing);
        row.network_id = net.id;
        row.h_target = net.homophily_target;
        row.density_class = net.density_class;
        row.run_index = c.run;
        rows[i] = std::move(row);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = cells.size();
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cells.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

// ---------------------------------------------------------------------------
// Aggregation

struct Summary {
  Stat mean;
  Stat std;  // sample standard deviation; 0 for a single value
  std::size_t count = 0;
};

inline Summary summarize(const std::vector<double>& xs) {
  Summary s;
  s.count = xs.size();
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  s.mean = mean;
  s.std = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
  return s;
}

struct AggregateRow {
  std::string network_id;
  Stat h_target;
  std::string density_class;
  std::string sampler;
  double p = 0.0;
  std::size_t runs_ok = 0;
  std::size_t runs_failed = 0;
  Summary roc_auc, error_class0, error_class1, overall_error, seed_edges;
  Stat measured_h, measured_b;
};

/// Mean and standard deviation over runs for each (network, sampler, p).
/// Undefined values and failed runs are left out of the statistics.
inline std::vector<AggregateRow> aggregate(const std::vector<ResultRow>& rows) {
  using Key = std::tuple<std::string, std::string, double>;
  std::map<Key, std::size_t> slot;
  std::vector<AggregateRow> out;
  struct Acc {
    std::vector<double> auc, e0, e1, overall, edges;
  };
  std::vector<Acc> acc;
  for (const auto& r : rows) {
    Key key{r.network_id, r.sampler, r.p};
    auto [it, fresh] = slot.try_emplace(key, out.size());
    if (fresh) {
      AggregateRow a;
      a.network_id = r.network_id;
      a.h_target = r.h_target;
      a.density_class = r.density_class;
      a.sampler = r.sampler;
      a.p = r.p;
      a.measured_h = r.measured_h;
      a.measured_b = r.measured_b;
      out.push_back(std::move(a));
      acc.emplace_back();
    }
    auto& a = out[it->second];
    auto& x = acc[it->second];
    if (!r.ok()) {
      ++a.runs_failed;
      continue;
    }
    ++a.runs_ok;
    if (r.roc_auc) x.auc.push_back(*r.roc_auc);
    if (r.error_class0) x.e0.push_back(*r.error_class0);
    if (r.error_class1) x.e1.push_back(*r.error_class1);
    if (r.overall_error) x.overall.push_back(*r.overall_error);
    if (r.seed_edges) x.edges.push_back(static_cast<double>(*r.seed_edges));
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].roc_auc = summarize(acc[i].auc);
    out[i].error_class0 = summarize(acc[i].e0);
    out[i].error_class1 = summarize(acc[i].e1);
    out[i].overall_error = summarize(acc[i].overall);
    out[i].seed_edges = summarize(acc[i].edges);
  }
  return out;
}

inline void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  write_csv_row(out, {"network_id", "H_target", "density_class", "sampler", "p", "runs_ok",
                      "runs_failed", "roc_auc_mean", "roc_auc_std", "error_class0_mean",
                      "error_class0_std", "error_class1_mean", "error_class1_std",
                      "overall_error_mean", "overall_error_std",
                      "seed_subgraph_edge_count_mean", "seed_subgraph_edge_count_std",
                      "measured_H", "measured_B"});
  for (const auto& a : rows) {
    write_csv_row(out, {a.network_id, format_real(a.h_target), a.density_class, a.sampler,
                        format_real(a.p), std::to_string(a.runs_ok),
                        std::to_string(a.runs_failed), format_real(a.roc_auc.mean),
                        format_real(a.roc_auc.std), format_real(a.error_class0.mean),
                        format_real(a.error_class0.std), format_real(a.error_class1.mean),
                        format_real(a.error_class1.std), format_real(a.overall_error.mean),
                        format_real(a.overall_error.std), format_real(a.seed_edges.mean),
                        format_real(a.seed_edges.std), format_real(a.measured_h),
                        format_real(a.measured_b)});
  }
}

struct SweepOutput {
  std::vector<ResultRow> rows;
  std::vector<AggregateRow> aggregates;
  std::vector<std::string> warnings;
  std::filesystem::path raw_csv;
  std::filesystem::path aggregate_csv;
};

/// Full sweep: builds networks, runs all cells, writes results.csv and
/// aggregate.csv into cfg.output_dir.
inline SweepOutput sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  namespace fs = std::filesystem;
  const fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw InputError("cannot create output directory '" + cfg.output_dir + "'");
  }
  SweepOutput out;
  const auto networks = build_networks(cfg, &out.warnings);
  out.rows = run_sweep(cfg, networks, resolve_threads(cfg.threads));
  out.aggregates = aggregate(out.rows);

  out.raw_csv = dir / "results.csv";
  out.aggregate_csv = dir / "aggregate.csv";
  std::ofstream raw(out.raw_csv, std::ios::binary);
  std::ofstream agg(out.aggregate_csv, std::ios::binary);
  if (!raw || !agg) throw InputError("cannot write into '" + cfg.output_dir + "'");
  write_results_csv(raw, out.rows);
  write_aggregate_csv(agg, out.aggregates);
  if (!raw.flush() || !agg.flush()) throw InputError("write to '" + cfg.output_dir + "' failed");
  return out;
}

// ---------------------------------------------------------------------------
// Summaries and plot tables

struct MinSample {
  std::string network_id;
  Stat h_target;
  std::string density_class;
  std::string sampler;
  std::optional<double> min_p;  // nullopt: no fraction reaches the threshold
};

/// Smallest p whose mean error stays below `threshold` for both classes.
inline std::vector<MinSample> summarize_min_sample(const std::vector<AggregateRow>& rows,
                                                   double threshold = 0.2) {
  std::vector<MinSample> out;
  std::map<std::pair<std::string, std::string>, std::size_t> slot;
  for (const auto& a : rows) {
    auto [it, fresh] = slot.try_emplace({a.network_id, a.sampler}, out.size());
    if (fresh) out.push_back({a.network_id, a.h_target, a.density_class, a.sampler, {}});
    const auto& e0 = a.error_class0.mean;
    const auto& e1 = a.error_class1.mean;
    if (e0 && e1 && *e0 < threshold && *e1 < threshold) {
      auto& best = out[it->second].min_p;
      if (!best || a.p < *best) best = a.p;
    }
  }
  return out;
}

enum class Figure { kRocAucCurves, kErrorHeatmap, kMinSampleBars };

inline Figure parse_figure(std::string_view s) {
  if (s == "rocauc_curves") return Figure::kRocAucCurves;
  if (s == "error_heatmap") return Figure::kErrorHeatmap;
  if (s == "min_sample_bars") return Figure::kMinSampleBars;
  throw InputError("unknown figure '" + std::string(s) +
                   "' (expected rocauc_curves, error_heatmap or min_sample_bars)");
}

struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// One tidy table per figure panel:
///   rocauc_curves   per network: x = p, series = sampler, ROC-AUC mean/std
///   error_heatmap   per density class and sampler: x = H, series = p,
///                   overall error mean/std (generated networks only)
///   min_sample_bars per network: sampler, minimal p
inline std::vector<Table> plot_data(const std::vector<AggregateRow>& rows, Figure figure,
                                    double threshold = 0.2) {
  std::vector<Table> tables;
  std::map<std::string, std::size_t> slot;
  auto panel = [&](const std::string& name,
                   std::vector<std::string> header) -> Table& {
    auto [it, fresh] = slot.try_emplace(name, tables.size());
    if (fresh) tables.push_back({name, std::move(header), {}});
    return tables[it->second];
  };
  switch (figure) {
    case Figure::kRocAucCurves:
      for (const auto& a : rows) {
        panel("rocauc_curves_" + a.network_id, {"x", "series", "mean", "std"})
            .rows.push_back({format_real(a.p), a.sampler, format_real(a.roc_auc.mean),
                             format_real(a.roc_auc.std)});
      }
      break;
    case Figure::kErrorHeatmap:
      for (const auto& a : rows) {
        if (!a.h_target) continue;
        panel("error_heatmap_" + a.density_class + "_" + a.sampler,
              {"x", "series", "mean", "std"})
            .rows.push_back({format_real(a.h_target), format_real(a.p),
                             format_real(a.overall_error.mean),
                             format_real(a.overall_error.std)});
      }
      break;
    case Figure::kMinSampleBars:
      for (const auto& m : summarize_min_sample(rows, threshold)) {
        panel("min_sample_bars_" + m.network_id, {"sampler", "min_p"})
            .rows.push_back({m.sampler, m.min_p ? format_real(m.min_p) : "none"});
      }
      break;
  }
  return tables;
}

}  // namespace netinfer
