#include "protoglyph/tu_io.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace protoglyph {
namespace {

namespace fs = std::filesystem;

std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> read_lines(const fs::path& p, bool mandatory) {
  std::ifstream in(p);
  if (!in) {
    if (mandatory) throw FormatError("missing dataset file: " + p.string());
    return {};
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  // Ignore trailing blank lines; blank lines elsewhere are treated as errors
  // by the per-line parsers.
  while (!lines.empty() && trimmed(lines.back()).empty()) lines.pop_back();
  return lines;
}

long parse_int(const std::string& tok, const fs::path& file, std::size_t line_no) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(trimmed(tok), &pos);
    if (pos != trimmed(tok).size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw FormatError(file.string() + ":" + std::to_string(line_no) + ": expected integer, got '" +
                      trimmed(tok) + "'");
  }
}

double parse_real(const std::string& tok, const fs::path& file, std::size_t line_no) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(trimmed(tok), &pos);
    if (pos != trimmed(tok).size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw FormatError(file.string() + ":" + std::to_string(line_no) + ": expected number, got '" +
                      trimmed(tok) + "'");
  }
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> toks;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) toks.push_back(tok);
  return toks;
}

}  // namespace

GraphDataset load_tu_dataset(const std::string& root_path, const std::string& name) {
  const fs::path root(root_path);
  const fs::path a_file = root / (name + "_A.txt");
  const fs::path ind_file = root / (name + "_graph_indicator.txt");
  const fs::path lab_file = root / (name + "_graph_labels.txt");
  const fs::path nlab_file = root / (name + "_node_labels.txt");
  const fs::path nattr_file = root / (name + "_node_attributes.txt");

  const auto ind_lines = read_lines(ind_file, true);
  const auto lab_lines = read_lines(lab_file, true);
  const auto a_lines = read_lines(a_file, true);
  const auto nlab_lines = read_lines(nlab_file, false);
  const auto nattr_lines = read_lines(nattr_file, false);

  const std::size_t n_nodes = ind_lines.size();
  const std::size_t n_graphs = lab_lines.size();
  if (n_graphs == 0) throw FormatError(lab_file.string() + ": no graph labels");

  // Global node -> (graph, local index), in file order.
  std::vector<int> graph_of(n_nodes);
  std::vector<int> local_of(n_nodes);
  std::vector<Index> nodes_per_graph(n_graphs, 0);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    const long gid = parse_int(ind_lines[i], ind_file, i + 1);
    if (gid < 1 || static_cast<std::size_t>(gid) > n_graphs)
      throw FormatError(ind_file.string() + ":" + std::to_string(i + 1) + ": node " +
                        std::to_string(i + 1) + " references graph " + std::to_string(gid) +
                        " but only " + std::to_string(n_graphs) + " graph labels exist");
    graph_of[i] = static_cast<int>(gid - 1);
    local_of[i] = static_cast<int>(nodes_per_graph[static_cast<std::size_t>(gid - 1)]++);
  }

  GraphDataset ds;
  ds.name = name;
  ds.graphs.resize(n_graphs);
  std::vector<int> raw_labels(n_graphs);
  for (std::size_t g = 0; g < n_graphs; ++g) {
    ds.graphs[g].node_count = nodes_per_graph[g];
    raw_labels[g] = static_cast<int>(parse_int(lab_lines[g], lab_file, g + 1));
  }

  for (std::size_t i = 0; i < a_lines.size(); ++i) {
    if (trimmed(a_lines[i]).empty()) continue;
    const auto toks = split_csv(a_lines[i]);
    if (toks.size() != 2)
      throw FormatError(a_file.string() + ":" + std::to_string(i + 1) +
                        ": expected 'u, v' edge pair");
    const long u = parse_int(toks[0], a_file, i + 1);
    const long v = parse_int(toks[1], a_file, i + 1);
    if (u < 1 || v < 1 || static_cast<std::size_t>(u) > n_nodes ||
        static_cast<std::size_t>(v) > n_nodes)
      throw FormatError(a_file.string() + ":" + std::to_string(i + 1) + ": node id out of range");
    const std::size_t ui = static_cast<std::size_t>(u - 1), vi = static_cast<std::size_t>(v - 1);
    if (graph_of[ui] != graph_of[vi])
      throw FormatError(a_file.string() + ":" + std::to_string(i + 1) +
                        ": edge endpoints belong to different graphs");
    ds.graphs[static_cast<std::size_t>(graph_of[ui])].edges.push_back(
        {local_of[ui], local_of[vi]});
  }
  for (auto& g : ds.graphs) normalize_edges(g);

  if (!nlab_lines.empty()) {
    if (nlab_lines.size() != n_nodes)
      throw FormatError(nlab_file.string() + ": expected " + std::to_string(n_nodes) +
                        " node labels, got " + std::to_string(nlab_lines.size()));
    for (auto& g : ds.graphs)
      g.node_labels.resize(static_cast<std::size_t>(g.node_count));
    for (std::size_t i = 0; i < n_nodes; ++i) {
      const int lab = static_cast<int>(parse_int(nlab_lines[i], nlab_file, i + 1));
      ds.graphs[static_cast<std::size_t>(graph_of[i])]
          .node_labels[static_cast<std::size_t>(local_of[i])] = lab;
    }
  }

  if (!nattr_lines.empty()) {
    if (nattr_lines.size() != n_nodes)
      throw FormatError(nattr_file.string() + ": expected " + std::to_string(n_nodes) +
                        " attribute rows, got " + std::to_string(nattr_lines.size()));
    const std::size_t width = split_csv(nattr_lines[0]).size();
    for (auto& g : ds.graphs)
      g.node_attributes = Mat::Zero(g.node_count, static_cast<Index>(width));
    for (std::size_t i = 0; i < n_nodes; ++i) {
      const auto toks = split_csv(nattr_lines[i]);
      if (toks.size() != width)
        throw FormatError(nattr_file.string() + ":" + std::to_string(i + 1) +
                          ": inconsistent attribute count");
      auto& g = ds.graphs[static_cast<std::size_t>(graph_of[i])];
      for (std::size_t c = 0; c < width; ++c)
        g.node_attributes(local_of[i], static_cast<Index>(c)) =
            parse_real(toks[c], nattr_file, i + 1);
    }
  }

  assign_contiguous_labels(ds, raw_labels);
  return ds;
}

void write_tu_dataset(const GraphDataset& ds, const std::string& root_path,
                      const std::string& name) {
  const fs::path root(root_path);
  fs::create_directories(root);
  std::ofstream a(root / (name + "_A.txt"));
  std::ofstream ind(root / (name + "_graph_indicator.txt"));
  std::ofstream lab(root / (name + "_graph_labels.txt"));
  if (!a || !ind || !lab) throw FormatError("cannot open output files under " + root.string());

  const bool labels = ds.has_node_labels();
  const bool attrs = ds.has_node_attributes();
  std::ofstream nlab, nattr;
  if (labels) nlab.open(root / (name + "_node_labels.txt"));
  if (attrs) nattr.open(root / (name + "_node_attributes.txt"));

  Index offset = 0;
  for (std::size_t gi = 0; gi < ds.graphs.size(); ++gi) {
    const Graph& g = ds.graphs[gi];
    lab << ds.to_original(g.label) << "\n";
    for (Index v = 0; v < g.node_count; ++v) {
      ind << gi + 1 << "\n";
      if (labels) nlab << g.node_labels[static_cast<std::size_t>(v)] << "\n";
      if (attrs) {
        for (Index c = 0; c < g.node_attributes.cols(); ++c) {
          if (c) nattr << ", ";
          nattr << std::setprecision(17) << g.node_attributes(v, c);
        }
        nattr << "\n";
      }
    }
    for (const auto& e : g.edges) {
      a << offset + e[0] + 1 << ", " << offset + e[1] + 1 << "\n";
      a << offset + e[1] + 1 << ", " << offset + e[0] + 1 << "\n";
    }
    offset += g.node_count;
  }
}

}  // namespace protoglyph
