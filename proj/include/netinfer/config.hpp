#pragma once

// Experiment configuration files. Two syntaxes are accepted:
//
//   key = value lines ('#' starts a comment; lists are comma or space separated)
//     base_seed = 7
//     homophily_grid = 0.1, 0.5, 0.9
//     samplers = nodes degreeDESC          (or "all")
//     network = sparse N=2000 m=4 minority=0.5 [seed=1]   (repeatable)
//     graph_file = data/caltech.txt                        (repeatable)
//
//   a JSON object with the same keys; "network" is an array of objects
//   {"class", "N", "m", "minority", "seed"} and "graph_file" an array.

#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "netinfer/error.hpp"
#include "netinfer/harness.hpp"

namespace netinfer {

namespace detail {

inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

inline double to_real(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    double x = std::stod(s, &used);
    if (used == s.size()) return x;
  } catch (const std::exception&) {
  }
  throw ParseError(line, "'" + s + "' is not a number");
}

inline std::uint64_t to_uint(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    if (!s.empty() && s[0] != '-') {
      auto x = std::stoull(s, &used);
      if (used == s.size()) return x;
    }
  } catch (const std::exception&) {
  }
  throw ParseError(line, "'" + s + "' is not a non-negative integer");
}

inline bool to_bool(const std::string& s, std::size_t line) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ParseError(line, "'" + s + "' is not a boolean");
}

inline std::vector<SamplingMethod> to_methods(const std::vector<std::string>& names) {
  if (names.size() == 1 && names[0] == "all") return {kAllMethods.begin(), kAllMethods.end()};
  std::vector<SamplingMethod> out;
  for (const auto& n : names) out.push_back(parse_method(n));
  return out;
}

// "sparse N=2000 m=4 minority=0.5 seed=3"
inline NetworkTemplate parse_network(const std::string& value, std::size_t line) {
  const auto parts = split_list(value);
  if (parts.empty()) throw ParseError(line, "network needs a class (sparse or dense)");
  NetworkTemplate t;
  t.density_class = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto eq = parts[i].find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected key=value, got '" + parts[i] + "'");
    const auto k = parts[i].substr(0, eq);
    const auto v = parts[i].substr(eq + 1);
    if (k == "N") t.nodes = to_uint(v, line);
    else if (k == "m") t.edges_per_node = to_uint(v, line);
    else if (k == "minority") t.minority_fraction = to_real(v, line);
    else if (k == "seed") t.seed = to_uint(v, line);
    else throw ParseError(line, "unknown network field '" + k + "'");
  }
  return t;
}

inline void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value,
                      std::size_t line, bool& networks_seen) {
  auto reals = [&] {
    std::vector<double> xs;
    for (const auto& s : split_list(value)) xs.push_back(to_real(s, line));
    return xs;
  };
  if (key == "base_seed") cfg.base_seed = to_uint(value, line);
  else if (key == "runs") cfg.runs = static_cast<int>(to_uint(value, line));
  else if (key == "output_dir") cfg.output_dir = value;
  else if (key == "threads") cfg.threads = static_cast<unsigned>(to_uint(value, line));
  else if (key == "record_timing") cfg.record_timing = to_bool(value, line);
  else if (key == "homophily_grid") cfg.homophily_grid = reals();
  else if (key == "sample_fractions") cfg.sample_fractions = reals();
  else if (key == "samplers") cfg.samplers = to_methods(split_list(value));
  else if (key == "iterations") cfg.relaxation.iterations = static_cast<int>(to_uint(value, line));
  else if (key == "beta0") cfg.relaxation.beta0 = to_real(value, line);
  else if (key == "decay") cfg.relaxation.decay = to_real(value, line);
  else if (key == "ci_radius") cfg.sampler_defaults.ci_radius = static_cast<int>(to_uint(value, line));
  else if (key == "pagerank_damping") cfg.sampler_defaults.pagerank_damping = to_real(value, line);
  else if (key == "pagerank_tol") cfg.sampler_defaults.pagerank_tol = to_real(value, line);
  else if (key == "network") {
    if (!networks_seen) cfg.generators.clear();
    networks_seen = true;
    cfg.generators.push_back(parse_network(value, line));
  } else if (key == "graph_file") {
    cfg.graph_files.push_back(value);
  } else {
    throw ParseError(line, "unknown key '" + key + "'");
  }
}

inline std::string json_scalar(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

}  // namespace detail

/// Defaults: the sparse (m = 4) and dense (m = 20) N = 2000 families on the
/// full homophily and fraction grids with all ten samplers, 5 runs each.
inline ExperimentConfig default_experiment() {
  ExperimentConfig cfg;
  cfg.generators = {{"sparse", 2000, 4, 0.5, {}}, {"dense", 2000, 20, 0.5, {}}};
  return cfg;
}

inline ExperimentConfig parse_config(std::istream& in) {
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  auto cfg = default_experiment();
  bool networks_seen = false;

  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError(std::string("invalid JSON config: ") + e.what());
    }
    for (const auto& [key, v] : doc.items()) {
      if (key == "network") {
        cfg.generators.clear();
        networks_seen = true;
        for (const auto& n : v) {
          NetworkTemplate t;
          t.density_class = n.value("class", "sparse");
          t.nodes = n.value("N", t.nodes);
          t.edges_per_node = n.value("m", t.edges_per_node);
          t.minority_fraction = n.value("minority", t.minority_fraction);
          if (n.contains("seed")) t.seed = n["seed"].get<std::uint64_t>();
          cfg.generators.push_back(t);
        }
      } else if (v.is_array()) {
        if (key == "graph_file") {
          for (const auto& f : v) cfg.graph_files.push_back(f.get<std::string>());
          continue;
        }
        std::string joined;
        for (const auto& x : v) joined += detail::json_scalar(x) + ",";
        detail::apply_key(cfg, key, joined, 0, networks_seen);
      } else {
        detail::apply_key(cfg, key, detail::json_scalar(v), 0, networks_seen);
      }
    }
  } else {
    std::istringstream lines(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(lines, raw)) {
      ++line_no;
      const auto hash = raw.find('#');
      const auto line = detail::trim(raw.substr(0, hash));
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
      detail::apply_key(cfg, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)),
                        line_no, networks_seen);
    }
  }
  // Listing only graph files means no generated networks.
  if (!networks_seen && !cfg.graph_files.empty()) cfg.generators.clear();
  cfg.validate();
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  return parse_config(in);
}

}  // namespace netinfer
