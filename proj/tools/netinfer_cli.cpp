// Command-line front end. Exit codes: 0 success, 1 input error, 2 internal error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "netinfer/netinfer.hpp"

namespace {

using nlohmann::json;
using namespace netinfer;

json stat_json(Stat s) { return s ? json(*s) : json(nullptr); }

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

LoadedGraph load_with_warnings(const std::string& path) {
  auto loaded = load_graph(path);
  print_warnings(loaded.warnings);
  return loaded;
}

json structural_json(const StructuralReport& r) {
  return {{"nodes", r.nodes},
          {"edges", r.edges},
          {"density", r.density},
          {"avg_degree", r.avg_degree},
          {"homophily", stat_json(r.homophily)},
          {"balance", r.balance},
          {"degree_assortativity", stat_json(r.degree_assortativity)},
          {"attribute_assortativity", stat_json(r.attribute_assortativity)},
          {"clustering", r.clustering}};
}

struct SamplerFlags {
  std::string method = "nodes";
  double p = 0.1;
  std::uint64_t seed = 0;
  int ci_radius = 2;
  double damping = 0.85;
  double tol = 1e-8;

  void attach(CLI::App* cmd) {
    cmd->add_option("--method", method, "Sampling method")->required();
    cmd->add_option("-p,--fraction", p, "Fraction of nodes to label")->required();
    cmd->add_option("--seed", seed, "RNG seed");
    cmd->add_option("--ci-radius", ci_radius, "Collective influence ball radius");
    cmd->add_option("--damping", damping, "PageRank damping");
    cmd->add_option("--tol", tol, "PageRank L1 tolerance");
  }

  SamplerSpec spec() const {
    return {parse_method(method), p, seed, ci_radius, damping, tol};
  }
};

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  return out;
}

std::vector<AggregateRow> aggregates_from(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open results file '" + path + "'");
  return aggregate(read_results_csv(in));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sampling-strategy benchmark for relational classification on attributed networks"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Grow a homophilic preferential-attachment network");
  GeneratorConfig gcfg;
  std::string gen_out;
  gen->add_option("-N,--nodes", gcfg.nodes, "Number of nodes");
  gen->add_option("-m,--edges-per-node", gcfg.edges_per_node, "Edges added per arriving node");
  gen->add_option("-H,--homophily", gcfg.homophily, "Homophily in [0, 1]");
  gen->add_option("--minority", gcfg.minority_fraction, "Fraction of class-1 nodes");
  gen->add_option("--seed", gcfg.seed, "RNG seed");
  gen->add_option("-o,--output", gen_out, "Output graph file (default: stdout)");

  // stats
  auto* stats = app.add_subcommand("stats", "Structural statistics of a graph file as JSON");
  std::string stats_in;
  stats->add_option("graph", stats_in, "Graph file")->required();

  // sample
  auto* samp = app.add_subcommand("sample", "Print the ids of a seed sample, one per line");
  std::string samp_in;
  SamplerFlags samp_flags;
  samp->add_option("graph", samp_in, "Graph file")->required();
  samp_flags.attach(samp);

  // classify
  auto* cls = app.add_subcommand("classify", "Sample, learn and infer; report metrics as JSON");
  std::string cls_in, cls_pred;
  SamplerFlags cls_flags;
  RelaxationParams relax;
  cls->add_option("graph", cls_in, "Graph file")->required();
  cls_flags.attach(cls);
  cls->add_option("--iterations", relax.iterations, "Relaxation labelling sweeps");
  cls->add_option("--beta0", relax.beta0, "Initial blending weight");
  cls->add_option("--decay", relax.decay, "Per-sweep decay of the blending weight");
  cls->add_option("--predictions", cls_pred, "Write per-node posteriors to this TSV file");

  // sweep
  auto* sw = app.add_subcommand("sweep", "Run an experiment grid and write CSV results");
  std::string sw_config, sw_outdir;
  unsigned sw_threads = 0;
  bool sw_threads_set = false;
  sw->add_option("--config", sw_config, "Config file (key = value lines or JSON)")->required();
  sw->add_option("--output-dir", sw_outdir, "Override output_dir");
  sw->add_option("--threads", sw_threads, "Worker count (0 = auto)")
      ->each([&](const std::string&) { sw_threads_set = true; });

  // summarize
  auto* sum = app.add_subcommand("summarize", "Minimal sample fraction per network and sampler");
  std::string sum_in, sum_out;
  double threshold = 0.2;
  sum->add_option("--input", sum_in, "Raw results CSV from sweep")->required();
  sum->add_option("--threshold", threshold, "Per-class error threshold");
  sum->add_option("-o,--output", sum_out, "Output CSV (default: stdout)");

  // plot-data
  auto* plot = app.add_subcommand("plot-data", "Write plot-ready tables for one figure");
  std::string plot_in, plot_fig, plot_dir = ".";
  double plot_threshold = 0.2;
  plot->add_option("--input", plot_in, "Raw results CSV from sweep")->required();
  plot->add_option("--figure", plot_fig, "rocauc_curves | error_heatmap | min_sample_bars")
      ->required();
  plot->add_option("--out-dir", plot_dir, "Directory for the tables");
  plot->add_option("--threshold", plot_threshold, "Threshold for min_sample_bars");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*gen) {
      const auto g = generate(gcfg);
      if (gen_out.empty()) {
        write_graph(std::cout, g);
      } else {
        auto out = open_output(gen_out);
        write_graph(out, g);
      }
    } else if (*stats) {
      const auto loaded = load_with_warnings(stats_in);
      std::cout << structural_json(structural(loaded.graph)).dump(2) << '\n';
    } else if (*samp) {
      const auto loaded = load_with_warnings(samp_in);
      for (NodeId v : sample(loaded.graph, samp_flags.spec()).nodes) {
        std::cout << loaded.ids[v] << '\n';
      }
    } else if (*cls) {
      const auto loaded = load_with_warnings(cls_in);
      const auto& g = loaded.graph;
      const auto spec = cls_flags.spec();
      const auto seeds = sample(g, spec);
      const auto model = learn_relational(g, seeds.nodes);
      const auto post = relaxation_label(g, seeds.nodes, model, relax);
      std::vector<double> score;
      std::vector<Label> predicted, truth;
      for (NodeId v = 0; v < g.node_count(); ++v) {
        if (post.frozen[v]) continue;
        score.push_back(post.p[v][1]);
        predicted.push_back(predict(post.p[v]));
        truth.push_back(g.label(v));
      }
      if (truth.empty()) throw InputError("empty test set: every node is a seed");
      const auto rep = classification_report(score, predicted, truth);
      json j{{"method", std::string(name(spec.method))},
             {"p", spec.fraction},
             {"seeds", seeds.nodes.size()},
             {"seed_subgraph_edge_count", induced_subgraph(g, seeds.nodes).graph.edge_count()},
             {"n_test", rep.n_test},
             {"roc_auc", stat_json(rep.roc_auc)},
             {"error_per_class",
              {{loaded.label_names[0], stat_json(rep.error_per_class[0])},
               {loaded.label_names[1], stat_json(rep.error_per_class[1])}}},
             {"overall_error", stat_json(rep.overall_error)},
             {"priors", model.priors.prior},
             {"cond", model.cond}};
      std::cout << j.dump(2) << '\n';
      if (!cls_pred.empty()) {
        auto out = open_output(cls_pred);
        out << "id\tseed\ttrue\tpredicted\tp_" << loaded.label_names[0] << "\tp_"
            << loaded.label_names[1] << '\n';
        for (NodeId v = 0; v < g.node_count(); ++v) {
          out << loaded.ids[v] << '\t' << int(post.frozen[v]) << '\t'
              << loaded.label_names[index(g.label(v))] << '\t'
              << loaded.label_names[index(predict(post.p[v]))] << '\t'
              << format_real(post.p[v][0]) << '\t' << format_real(post.p[v][1]) << '\n';
        }
      }
    } else if (*sw) {
      auto cfg = load_config(sw_config);
      if (!sw_outdir.empty()) cfg.output_dir = sw_outdir;
      if (sw_threads_set) cfg.threads = sw_threads;
      const auto result = sweep(cfg);
      print_warnings(result.warnings);
      std::size_t failed = 0;
      for (const auto& r : result.rows) failed += !r.ok();
      std::cerr << result.rows.size() << " rows (" << failed << " error-marked) -> "
                << result.raw_csv.string() << ", " << result.aggregate_csv.string() << '\n';
    } else if (*sum) {
      const auto mins = summarize_min_sample(aggregates_from(sum_in), threshold);
      std::ofstream file;
      if (!sum_out.empty()) file = open_output(sum_out);
      std::ostream& out = sum_out.empty() ? std::cout : file;
      write_csv_row(out, {"network_id", "H_target", "density_class", "sampler", "min_p"});
      for (const auto& m : mins) {
        write_csv_row(out, {m.network_id, format_real(m.h_target), m.density_class, m.sampler,
                            m.min_p ? format_real(m.min_p) : "none"});
      }
    } else if (*plot) {
      const auto figure = parse_figure(plot_fig);
      const auto tables = plot_data(aggregates_from(plot_in), figure, plot_threshold);
      std::filesystem::create_directories(plot_dir);
      for (const auto& t : tables) {
        const auto path = (std::filesystem::path(plot_dir) / (t.name + ".csv")).string();
        auto out = open_output(path);
        write_csv_row(out, t.header);
        for (const auto& row : t.rows) write_csv_row(out, row);
        std::cout << path << '\n';
      }
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
