#pragma once

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "protoglyph/types.hpp"

namespace protoglyph {

class DatasetError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One undirected graph with a graph-level class label. Edges are stored once
// with endpoints ordered (lo, hi); adjacency queries emit both directions.
struct Graph {
  Index node_count = 0;
  std::vector<std::array<int, 2>> edges;
  Mat features;  // node_count x d_in once a feature policy has been applied
  int label = 0; // contiguous class id within the owning dataset

  // Raw per-node annotations from the source files, kept for feature init.
  std::vector<int> node_labels;
  Mat node_attributes;

  std::vector<int> degrees() const {
    std::vector<int> deg(static_cast<std::size_t>(node_count), 0);
    for (const auto& e : edges) {
      deg[static_cast<std::size_t>(e[0])]++;
      deg[static_cast<std::size_t>(e[1])]++;
    }
    return deg;
  }
};

// Drops self-loops, orders endpoints, deduplicates. Throws if an endpoint is
// out of range.
void normalize_edges(Graph& g);

struct GraphDataset {
  std::vector<Graph> graphs;
  std::vector<int> class_ids;           // contiguous 0..C-1, sorted
  std::vector<int> original_class_ids;  // original label for each contiguous id
  std::string name;
  Index d_in = 0;

  int n_classes() const { return static_cast<int>(class_ids.size()); }

  bool has_node_labels() const;
  bool has_node_attributes() const;

  int to_original(int contiguous_id) const;
  int to_contiguous(int original_id) const;  // throws DatasetError if unknown

  // Dataset indices grouped by contiguous class id.
  std::vector<std::vector<int>> indices_by_class() const;
};

// Rebuilds the contiguous label mapping from the graphs' original labels;
// `raw_labels[i]` is the original label of graphs[i].
void assign_contiguous_labels(GraphDataset& ds, const std::vector<int>& raw_labels);

struct DatasetStats {
  double avg_nodes = 0.0;
  double avg_edges = 0.0;
  int n_samples = 0;
  int n_classes = 0;
  std::map<int, int> samples_per_class;  // keyed by original class id
};

DatasetStats dataset_stats(const GraphDataset& ds);

enum class FeaturePolicy {
  Auto,                  // node labels if present, else degree one-hot
  OneHotNodeLabel,
  ContinuousAttributes,
  DegreeOneHot,
  ConstantOne,
};

FeaturePolicy feature_policy_from_string(const std::string& s);
std::string to_string(FeaturePolicy p);

// Populates `features` and `d_in` for every graph; the rest of the dataset is
// untouched. Total over all valid inputs: isolated nodes land in the degree-0
// bucket, unseen policies throw.
GraphDataset init_node_features(GraphDataset ds, FeaturePolicy policy, int degree_max = 16);

}  // namespace protoglyph
