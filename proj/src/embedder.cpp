#include "protoglyph/embedder.hpp"

#include <cmath>

namespace protoglyph {

using ad::VarD;

Pooling pooling_from_string(const std::string& s) {
  if (s == "mean") return Pooling::Mean;
  if (s == "sum") return Pooling::Sum;
  if (s == "mean+var") return Pooling::MeanVar;
  throw DatasetError("unknown pooling mode: " + s);
}

std::string to_string(Pooling p) {
  switch (p) {
    case Pooling::Mean: return "mean";
    case Pooling::Sum: return "sum";
    case Pooling::MeanVar: return "mean+var";
  }
  return "?";
}

namespace {

GraphBatch assemble(const std::vector<const Graph*>& graphs) {
  GraphBatch b;
  b.n_graphs = static_cast<Index>(graphs.size());
  Index total = 0;
  b.node_offset.reserve(graphs.size() + 1);
  for (const Graph* g : graphs) {
    b.node_offset.push_back(total);
    total += g->node_count;
  }
  b.node_offset.push_back(total);

  const Index d_in = graphs.empty() ? 0 : graphs.front()->features.cols();
  b.features.resize(total, d_in);
  b.mean_pool = Mat::Zero(b.n_graphs, total);
  b.sum_pool = Mat::Zero(b.n_graphs, total);
  b.expand = Mat::Zero(total, b.n_graphs);

  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const Graph& g = *graphs[gi];
    if (g.features.cols() != d_in || g.features.rows() != g.node_count)
      throw DatasetError("make_batch: graph features missing or inconsistent; apply a feature "
                         "policy before batching");
    const Index off = b.node_offset[gi];
    b.features.middleRows(off, g.node_count) = g.features;
    const Real inv = Real(1) / static_cast<Real>(g.node_count);
    for (Index v = 0; v < g.node_count; ++v) {
      b.mean_pool(static_cast<Index>(gi), off + v) = inv;
      b.sum_pool(static_cast<Index>(gi), off + v) = 1.0;
      b.expand(off + v, static_cast<Index>(gi)) = 1.0;
    }
    for (const auto& e : g.edges) {
      b.directed_edges.push_back({off + e[0], off + e[1]});
      b.directed_edges.push_back({off + e[1], off + e[0]});
    }
  }
  return b;
}

Mat glorot(Index rows, Index cols, RngStream& rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Mat m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = (2.0 * rng.next_unit() - 1.0) * a;
  return m;
}

std::string layer_prefix(int layer) { return "embedder.layer" + std::to_string(layer); }

}  // namespace

GraphBatch make_batch(const std::vector<const Graph*>& graphs) { return assemble(graphs); }

GraphBatch make_batch(const GraphDataset& ds, const std::vector<int>& graph_indices) {
  std::vector<const Graph*> ptrs;
  ptrs.reserve(graph_indices.size());
  for (int i : graph_indices) ptrs.push_back(&ds.graphs.at(static_cast<std::size_t>(i)));
  return assemble(ptrs);
}

void init_embedder_params(ParameterStore& store, const EmbedderConfig& cfg, Index d_in,
                          RngStream& rng) {
  if (cfg.n_layers < 1 || cfg.hidden_dim < 1 || cfg.mlp_layers < 1)
    throw DatasetError("embedder config requires n_layers, hidden_dim, mlp_layers >= 1");
  for (int l = 0; l < cfg.n_layers; ++l) {
    const std::string p = layer_prefix(l);
    store.create(p + ".epsilon", Mat::Zero(1, 1));
    Index in_dim = l == 0 ? d_in : cfg.hidden_dim;
    for (int i = 0; i < cfg.mlp_layers; ++i) {
      const std::string mp = p + ".mlp." + std::to_string(i);
      store.create(mp + ".w", glorot(in_dim, cfg.hidden_dim, rng));
      store.create(mp + ".b", Mat::Zero(1, cfg.hidden_dim));
      if (i < cfg.mlp_layers - 1) {
        const std::string gp = p + ".gn." + std::to_string(i);
        store.create(gp + ".alpha", Mat::Ones(1, cfg.hidden_dim));
        store.create(gp + ".gamma", Mat::Ones(1, cfg.hidden_dim));
        store.create(gp + ".beta", Mat::Zero(1, cfg.hidden_dim));
      }
      in_dim = cfg.hidden_dim;
    }
  }
  if (cfg.pooling == Pooling::MeanVar) {
    const Index d = cfg.output_dim();
    const Index half = std::max<Index>(1, d / 2);
    store.create("embedder.pool.halve.w", glorot(d, half, rng));
    store.create("embedder.pool.halve.b", Mat::Zero(1, half));
  }
}

ad::VarD graph_norm(ad::TapeD& tape, VarD h, const GraphBatch& batch, VarD alpha, VarD gamma,
                    VarD beta) {
  VarD mean_pool = tape.constant(batch.mean_pool);
  VarD expand = tape.constant(batch.expand);
  VarD mu = matmul(mean_pool, h);                               // per graph, per channel
  VarD centered = h - matmul(expand, mul_row_vector(mu, alpha));
  VarD mean_sq = matmul(mean_pool, square(centered));
  VarD inv_std = rsqrt_shifted(mean_sq, 1e-5);
  VarD normalized = cwise_mul(centered, matmul(expand, inv_std));
  return add_row_vector(mul_row_vector(normalized, gamma), beta);
}

ad::VarD gin_layer_forward(ad::TapeD& tape, const ParameterStore& store,
                           const EmbedderConfig& cfg, int layer, VarD h,
                           const GraphBatch& batch) {
  const std::string p = layer_prefix(layer);
  VarD eps = use_parameter(tape, store, p + ".epsilon");
  VarD agg = neighbor_sum(h, batch.directed_edges) + broadcast_scale(h, shift(eps, 1.0));

  VarD z = agg;
  for (int i = 0; i < cfg.mlp_layers; ++i) {
    const std::string mp = p + ".mlp." + std::to_string(i);
    z = add_row_vector(matmul(z, use_parameter(tape, store, mp + ".w")),
                       use_parameter(tape, store, mp + ".b"));
    if (i < cfg.mlp_layers - 1) {
      const std::string gp = p + ".gn." + std::to_string(i);
      z = graph_norm(tape, z, batch, use_parameter(tape, store, gp + ".alpha"),
                     use_parameter(tape, store, gp + ".gamma"),
                     use_parameter(tape, store, gp + ".beta"));
      z = relu(z);
    }
  }
  return z;
}

ad::VarD global_pool(ad::TapeD& tape, const ParameterStore& store, VarD h_concat,
                     const GraphBatch& batch, Pooling mode) {
  switch (mode) {
    case Pooling::Mean:
      return matmul(tape.constant(batch.mean_pool), h_concat);
    case Pooling::Sum:
      return matmul(tape.constant(batch.sum_pool), h_concat);
    case Pooling::MeanVar: {
      VarD mapped = add_row_vector(matmul(h_concat, use_parameter(tape, store, "embedder.pool.halve.w")),
                                   use_parameter(tape, store, "embedder.pool.halve.b"));
      VarD mean_pool = tape.constant(batch.mean_pool);
      VarD m = matmul(mean_pool, mapped);
      VarD diff = mapped - matmul(tape.constant(batch.expand), m);
      VarD var = matmul(mean_pool, square(diff));
      VarD sd = sqrt_shifted(var, 1e-8);
      return concat_cols<Real>({m, sd});
    }
  }
  throw ad::ContractError("global_pool: unknown mode");
}

ad::VarD embed_graphs(ad::TapeD& tape, const ParameterStore& store, const EmbedderConfig& cfg,
                      const GraphBatch& batch, const Conditioning* conditioning, bool train_mode,
                      RngStream* dropout_rng) {
  if (conditioning &&
      (conditioning->gamma.size() != static_cast<std::size_t>(cfg.n_layers) ||
       conditioning->beta.size() != static_cast<std::size_t>(cfg.n_layers)))
    throw ad::ContractError("conditioning must provide one (gamma, beta) pair per layer");

  VarD h = tape.constant(batch.features);
  std::vector<VarD> layer_outputs;
  layer_outputs.reserve(static_cast<std::size_t>(cfg.n_layers));
  for (int l = 0; l < cfg.n_layers; ++l) {
    h = gin_layer_forward(tape, store, cfg, l, h, batch);
    if (conditioning) {
      const auto li = static_cast<std::size_t>(l);
      if (conditioning->gamma[li].cols() != cfg.hidden_dim)
        throw ad::ContractError("conditioning width " +
                                std::to_string(conditioning->gamma[li].cols()) +
                                " does not match hidden_dim " + std::to_string(cfg.hidden_dim));
      h = add_row_vector(mul_row_vector(h, conditioning->gamma[li]), conditioning->beta[li]);
    }
    if (train_mode && cfg.dropout > 0.0) {
      if (!dropout_rng) throw ad::ContractError("dropout requires an rng stream in train mode");
      Mat mask(h.rows(), h.cols());
      const Real keep = 1.0 - cfg.dropout;
      for (Index i = 0; i < mask.rows(); ++i)
        for (Index j = 0; j < mask.cols(); ++j)
          mask(i, j) = dropout_rng->next_unit() < cfg.dropout ? 0.0 : 1.0 / keep;
      h = cwise_mul(h, tape.constant(std::move(mask)));
    }
    layer_outputs.push_back(h);
  }
  VarD nodes = layer_outputs.size() == 1 ? layer_outputs.front() : concat_cols(layer_outputs);
  return global_pool(tape, store, nodes, batch, cfg.pooling);
}

}  // namespace protoglyph
