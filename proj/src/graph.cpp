#include "protoglyph/graph.hpp"

#include <algorithm>
#include <set>

namespace protoglyph {

void normalize_edges(Graph& g) {
  std::vector<std::array<int, 2>> cleaned;
  cleaned.reserve(g.edges.size());
  for (auto e : g.edges) {
    if (e[0] < 0 || e[1] < 0 || e[0] >= g.node_count || e[1] >= g.node_count) {
      throw DatasetError("edge endpoint out of range: (" + std::to_string(e[0]) + ", " +
                         std::to_string(e[1]) + ") with node_count " +
                         std::to_string(g.node_count));
    }
    if (e[0] == e[1]) continue;  // self-loop; GIN's (1+eps) term already covers the node itself
    if (e[0] > e[1]) std::swap(e[0], e[1]);
    cleaned.push_back(e);
  }
  std::sort(cleaned.begin(), cleaned.end());
  cleaned.erase(std::unique(cleaned.begin(), cleaned.end()), cleaned.end());
  g.edges = std::move(cleaned);
}

bool GraphDataset::has_node_labels() const {
  for (const auto& g : graphs)
    if (g.node_labels.size() != static_cast<std::size_t>(g.node_count)) return false;
  return !graphs.empty();
}

bool GraphDataset::has_node_attributes() const {
  for (const auto& g : graphs)
    if (g.node_attributes.rows() != g.node_count || g.node_attributes.cols() == 0) return false;
  return !graphs.empty();
}

int GraphDataset::to_original(int contiguous_id) const {
  if (contiguous_id < 0 || contiguous_id >= n_classes())
    throw DatasetError("unknown contiguous class id " + std::to_string(contiguous_id));
  return original_class_ids[static_cast<std::size_t>(contiguous_id)];
}

int GraphDataset::to_contiguous(int original_id) const {
  for (std::size_t i = 0; i < original_class_ids.size(); ++i)
    if (original_class_ids[i] == original_id) return static_cast<int>(i);
  throw DatasetError("class " + std::to_string(original_id) + " not present in dataset " + name);
}

std::vector<std::vector<int>> GraphDataset::indices_by_class() const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(n_classes()));
  for (std::size_t i = 0; i < graphs.size(); ++i)
    out[static_cast<std::size_t>(graphs[i].label)].push_back(static_cast<int>(i));
  return out;
}

void assign_contiguous_labels(GraphDataset& ds, const std::vector<int>& raw_labels) {
  if (raw_labels.size() != ds.graphs.size())
    throw DatasetError("label count does not match graph count");
  std::set<int> distinct(raw_labels.begin(), raw_labels.end());
  ds.original_class_ids.assign(distinct.begin(), distinct.end());
  ds.class_ids.resize(ds.original_class_ids.size());
  for (std::size_t i = 0; i < ds.class_ids.size(); ++i) ds.class_ids[i] = static_cast<int>(i);
  for (std::size_t i = 0; i < ds.graphs.size(); ++i)
    ds.graphs[i].label = ds.to_contiguous(raw_labels[i]);
}

DatasetStats dataset_stats(const GraphDataset& ds) {
  if (ds.graphs.empty()) throw DatasetError("dataset_stats: empty dataset");
  DatasetStats st;
  double nodes = 0.0, edges = 0.0;
  for (const auto& g : ds.graphs) {
    nodes += static_cast<double>(g.node_count);
    edges += static_cast<double>(g.edges.size());
    st.samples_per_class[ds.to_original(g.label)]++;
  }
  st.n_samples = static_cast<int>(ds.graphs.size());
  st.n_classes = ds.n_classes();
  st.avg_nodes = nodes / st.n_samples;
  st.avg_edges = edges / st.n_samples;
  return st;
}

FeaturePolicy feature_policy_from_string(const std::string& s) {
  if (s == "auto") return FeaturePolicy::Auto;
  if (s == "one-hot-node-label") return FeaturePolicy::OneHotNodeLabel;
  if (s == "continuous-attributes") return FeaturePolicy::ContinuousAttributes;
  if (s == "degree-one-hot") return FeaturePolicy::DegreeOneHot;
  if (s == "constant-one") return FeaturePolicy::ConstantOne;
  throw DatasetError("unknown feature policy: " + s);
}

std::string to_string(FeaturePolicy p) {
  switch (p) {
    case FeaturePolicy::Auto: return "auto";
    case FeaturePolicy::OneHotNodeLabel: return "one-hot-node-label";
    case FeaturePolicy::ContinuousAttributes: return "continuous-attributes";
    case FeaturePolicy::DegreeOneHot: return "degree-one-hot";
    case FeaturePolicy::ConstantOne: return "constant-one";
  }
  return "?";
}

GraphDataset init_node_features(GraphDataset ds, FeaturePolicy policy, int degree_max) {
  if (policy == FeaturePolicy::Auto)
    policy = ds.has_node_labels() ? FeaturePolicy::OneHotNodeLabel : FeaturePolicy::DegreeOneHot;

  switch (policy) {
    case FeaturePolicy::OneHotNodeLabel: {
      if (!ds.has_node_labels())
        throw DatasetError("one-hot-node-label requested but dataset '" + ds.name +
                           "' has no node labels");
      std::set<int> distinct;
      for (const auto& g : ds.graphs) distinct.insert(g.node_labels.begin(), g.node_labels.end());
      std::vector<int> order(distinct.begin(), distinct.end());
      ds.d_in = static_cast<Index>(order.size());
      for (auto& g : ds.graphs) {
        g.features = Mat::Zero(g.node_count, ds.d_in);
        for (Index v = 0; v < g.node_count; ++v) {
          const auto it = std::lower_bound(order.begin(), order.end(),
                                           g.node_labels[static_cast<std::size_t>(v)]);
          g.features(v, static_cast<Index>(it - order.begin())) = 1.0;
        }
      }
      break;
    }
    case FeaturePolicy::ContinuousAttributes: {
      if (!ds.has_node_attributes())
        throw DatasetError("continuous-attributes requested but dataset '" + ds.name +
                           "' has no node attributes");
      ds.d_in = ds.graphs.front().node_attributes.cols();
      for (auto& g : ds.graphs) {
        if (g.node_attributes.cols() != ds.d_in)
          throw DatasetError("inconsistent node attribute dimension in dataset " + ds.name);
        g.features = g.node_attributes;
      }
      break;
    }
    case FeaturePolicy::DegreeOneHot: {
      if (degree_max < 0) throw DatasetError("degree-one-hot: degree_max must be >= 0");
      ds.d_in = static_cast<Index>(degree_max) + 1;
      for (auto& g : ds.graphs) {
        g.features = Mat::Zero(g.node_count, ds.d_in);
        const auto deg = g.degrees();
        for (Index v = 0; v < g.node_count; ++v) {
          const int bucket = std::min(deg[static_cast<std::size_t>(v)], degree_max);
          g.features(v, bucket) = 1.0;
        }
      }
      break;
    }
    case FeaturePolicy::ConstantOne: {
      ds.d_in = 1;
      for (auto& g : ds.graphs) g.features = Mat::Ones(g.node_count, 1);
      break;
    }
    case FeaturePolicy::Auto: break;  // resolved above
  }
  return ds;
}

}  // namespace protoglyph
