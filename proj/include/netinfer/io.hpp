#pragma once

// Text formats: the attributed edge-list graph file and RFC-4180 CSV.
//
// Graph file:
//   #nodes <N>
//   <id> <label>      (N lines; labels are arbitrary strings, NA = missing)
//   <blank line>
//   <id> <id>         (one line per edge)
// Tokens are whitespace separated; other lines starting with '#' are comments.

#include <array>
#include <cstdio>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "netinfer/error.hpp"
#include "netinfer/graph.hpp"

namespace netinfer {

struct LoadedGraph {
  AttributedGraph graph;
  std::vector<std::string> ids;           // external id per node
  std::array<std::string, 2> label_names;  // external label per class
  std::vector<std::string> warnings;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const auto start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

inline bool is_missing_label(std::string_view s) { return s == "NA" || s == "?"; }

}  // namespace detail

/// Parses a graph file. Nodes lacking a label, and nodes left without edges,
/// are dropped; duplicate edges are collapsed with a warning.
inline LoadedGraph read_graph(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  std::optional<std::size_t> declared;
  std::size_t header_line = 0;
  enum class Section { kHeader, kNodes, kEdges } section = Section::kHeader;

  std::unordered_map<std::string, std::size_t> node_index;
  std::vector<std::string> node_ids;
  std::vector<std::optional<Label>> node_label;
  std::array<std::string, 2> label_names;
  std::size_t label_count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> raw_edges;
  std::size_t dangling_edges = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto tok = detail::split_ws(line);
    if (tok.empty()) {
      if (section == Section::kNodes && !node_ids.empty()) section = Section::kEdges;
      continue;
    }
    if (tok[0].starts_with('#')) {
      if (tok[0] == "#nodes") {
        if (declared) throw ParseError(line_no, "duplicate #nodes header");
        if (tok.size() != 2) throw ParseError(line_no, "expected '#nodes <N>'");
        try {
          std::size_t used = 0;
          declared = std::stoull(std::string(tok[1]), &used);
          if (used != tok[1].size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
          throw ParseError(line_no, "node count is not a number");
        }
        header_line = line_no;
        section = Section::kNodes;
      }
      continue;
    }
    if (section == Section::kHeader) throw ParseError(line_no, "missing '#nodes <N>' header");
    if (tok.size() != 2) {
      throw ParseError(line_no, "expected two tokens, found " + std::to_string(tok.size()));
    }
    if (section == Section::kNodes) {
      std::string id(tok[0]);
      if (node_index.contains(id)) throw ParseError(line_no, "node '" + id + "' listed twice");
      std::optional<Label> label;
      if (!detail::is_missing_label(tok[1])) {
        std::size_t c = 0;
        while (c < label_count && label_names[c] != tok[1]) ++c;
        if (c == label_count) {
          if (label_count == 2) {
            throw ParseError(line_no, "third class label '" + std::string(tok[1]) +
                                          "'; only binary labels are supported");
          }
          label_names[label_count++] = std::string(tok[1]);
        }
        label = label_from_index(c);
      }
      node_index.emplace(id, node_ids.size());
      node_ids.push_back(std::move(id));
      node_label.push_back(label);
    } else {
      const auto a = node_index.find(std::string(tok[0]));
      const auto b = node_index.find(std::string(tok[1]));
      if (tok[0] == tok[1]) throw ParseError(line_no, "self-loop on '" + std::string(tok[0]) + "'");
      if (a == node_index.end() || b == node_index.end()) {
        ++dangling_edges;
        continue;
      }
      raw_edges.emplace_back(a->second, b->second);
    }
  }
  if (!declared) throw ParseError(line_no == 0 ? 1 : line_no, "missing '#nodes <N>' header");
  if (*declared != node_ids.size()) {
    throw ParseError(header_line, "header declares " + std::to_string(*declared) +
                                      " nodes but " + std::to_string(node_ids.size()) +
                                      " are listed");
  }

  LoadedGraph out;
  if (dangling_edges > 0) {
    out.warnings.push_back(std::to_string(dangling_edges) +
                           " edge(s) reference unlisted nodes and were ignored");
  }

  // Keep labelled nodes that touch at least one labelled neighbor.
  const auto n = node_ids.size();
  std::vector<std::size_t> degree(n, 0);
  for (auto [u, v] : raw_edges) {
    if (node_label[u] && node_label[v]) {
      ++degree[u];
      ++degree[v];
    }
  }
  std::vector<NodeId> remap(n, static_cast<NodeId>(-1));
  std::vector<Label> labels;
  std::size_t unlabelled = 0, isolated = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!node_label[i]) {
      ++unlabelled;
    } else if (degree[i] == 0) {
      ++isolated;
    } else {
      remap[i] = static_cast<NodeId>(labels.size());
      labels.push_back(*node_label[i]);
      out.ids.push_back(node_ids[i]);
    }
  }
  if (unlabelled > 0) {
    out.warnings.push_back("dropped " + std::to_string(unlabelled) + " node(s) without a label");
  }
  if (isolated > 0) {
    out.warnings.push_back("dropped " + std::to_string(isolated) + " node(s) without edges");
  }

  std::vector<Edge> edges;
  edges.reserve(raw_edges.size());
  for (auto [u, v] : raw_edges) {
    if (remap[u] != static_cast<NodeId>(-1) && remap[v] != static_cast<NodeId>(-1)) {
      edges.push_back({remap[u], remap[v]});
    }
  }
  std::array<bool, 2> present{false, false};
  for (auto c : labels) present[index(c)] = true;
  if (!present[0] || !present[1]) {
    throw InputError("graph needs both classes after dropping unusable nodes");
  }
  out.graph = AttributedGraph(std::move(labels), edges);
  if (out.graph.duplicates_collapsed() > 0) {
    out.warnings.push_back("collapsed " + std::to_string(out.graph.duplicates_collapsed()) +
                           " duplicate edge(s)");
  }
  out.label_names = label_names;
  return out;
}

inline LoadedGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file '" + path + "'");
  return read_graph(in);
}

// Writes ids 0..N-1 and labels "0"/"1".
inline void write_graph(std::ostream& out, const AttributedGraph& g) {
  out << "#nodes " << g.node_count() << '\n';
  for (NodeId v = 0; v < g.node_count(); ++v) out << v << ' ' << index(g.label(v)) << '\n';
  out << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

// ---------------------------------------------------------------------------
// CSV

// Six significant digits, "NA" when undefined.
inline std::string format_real(std::optional<double> x) {
  if (!x) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", *x);
  return buf;
}

inline std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << csv_escape(fields[i]);
  }
  out << "\r\n";
}

/// Reads an RFC-4180 document (quoted fields may span lines).
inline std::vector<std::vector<std::string>> read_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, field_started = false;
  std::size_t line = 1;
  char c;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
  };
  while (in.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started) throw ParseError(line, "stray quote inside unquoted CSV field");
        quoted = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        ++line;
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (quoted) throw ParseError(line, "unterminated quoted CSV field");
  if (field_started || !row.empty()) end_row();
  return rows;
}

}  // namespace netinfer
