#pragma once

#include <optional>
#include <string>
#include <vector>

#include "protoglyph/autodiff.hpp"
#include "protoglyph/graph.hpp"
#include "protoglyph/params.hpp"
#include "protoglyph/rng.hpp"

namespace protoglyph {

enum class Pooling { Mean, Sum, MeanVar };

Pooling pooling_from_string(const std::string& s);
std::string to_string(Pooling p);

struct EmbedderConfig {
  int n_layers = 2;      // stacked GIN convolutions
  int hidden_dim = 64;   // width of every layer output
  int mlp_layers = 2;    // linears inside each GIN MLP
  double dropout = 0.0;
  Pooling pooling = Pooling::Mean;

  // Node embeddings concatenate all layer outputs (jumping knowledge).
  Index output_dim() const { return static_cast<Index>(n_layers) * hidden_dim; }
};

// A set of graphs stacked into one node matrix, with the constant structure
// matrices the forward pass needs: per-graph mean/sum pooling operators and
// the node->graph broadcast selector.
struct GraphBatch {
  Mat features;  // total_nodes x d_in
  std::vector<std::array<Index, 2>> directed_edges;
  std::vector<Index> node_offset;  // per graph, plus total as last entry
  Index n_graphs = 0;

  Mat mean_pool;  // n_graphs x total_nodes
  Mat sum_pool;   // n_graphs x total_nodes
  Mat expand;     // total_nodes x n_graphs, one-hot graph membership
};

GraphBatch make_batch(const GraphDataset& ds, const std::vector<int>& graph_indices);
GraphBatch make_batch(const std::vector<const Graph*>& graphs);

// Per-layer FiLM vectors, each 1 x hidden_dim.
struct Conditioning {
  std::vector<ad::VarD> gamma;
  std::vector<ad::VarD> beta;
};

// Parameter names follow
//   embedder.layer{l}.epsilon
//   embedder.layer{l}.mlp.{i}.{w|b}
//   embedder.layer{l}.gn.{i}.{alpha|gamma|beta}   (after each hidden linear)
//   embedder.pool.halve.{w|b}                     (mean+var pooling only)
void init_embedder_params(ParameterStore& store, const EmbedderConfig& cfg, Index d_in,
                          RngStream& rng);

// h'_v = MLP((1 + eps) * h_v + sum of neighbor rows), neighbor sums running
// over both directions of every undirected edge.
ad::VarD gin_layer_forward(ad::TapeD& tape, const ParameterStore& store,
                           const EmbedderConfig& cfg, int layer, ad::VarD h,
                           const GraphBatch& batch);

// Per graph g and channel c:
//   out = gamma * (h - alpha * mu) / sqrt(ms + 1e-5) + beta
// where mu is the within-graph mean of h and ms the within-graph mean of
// (h - alpha * mu)^2.
ad::VarD graph_norm(ad::TapeD& tape, ad::VarD h, const GraphBatch& batch, ad::VarD alpha,
                    ad::VarD gamma, ad::VarD beta);

// Graph-level readout. MeanVar first halves the channel dimension with the
// learnable map `embedder.pool.halve`, then concatenates per-graph mean and
// population standard deviation of the mapped rows.
ad::VarD global_pool(ad::TapeD& tape, const ParameterStore& store, ad::VarD h_concat,
                     const GraphBatch& batch, Pooling mode);

// Full embedder: stacked GIN layers, optional FiLM conditioning of each layer
// output, dropout in train mode, jumping-knowledge concat, global pooling.
// Returns one embedding row per graph (n_graphs x output_dim).
ad::VarD embed_graphs(ad::TapeD& tape, const ParameterStore& store, const EmbedderConfig& cfg,
                      const GraphBatch& batch, const Conditioning* conditioning, bool train_mode,
                      RngStream* dropout_rng);

}  // namespace protoglyph
