#pragma once

#include "protoglyph/embedder.hpp"
#include "protoglyph/params.hpp"

namespace protoglyph {

// Task Embedding Network: two residual MLPs predicting per-layer FiLM vectors
// from the episode representation. Each predictor shares one relu trunk and
// has a per-layer output head; the head also carries a linear projection of
// the raw input, so head(x) = W_h * trunk(x) + W_p * x + b (a learned skip,
// folded into one weight acting on [trunk(x), x]).
//
// The vectors that reach the embedder are
//   beta  = beta0  * g(p_e)
//   gamma = gamma0 * h(p_e) + 1
// with one learnable scalar pair (gamma0, beta0) per embedder layer.
//
// Parameter names:
//   tae.{g|h}.trunk.{w|b}
//   tae.{g|h}.head{l}.{w|b}
//   tae.layer{l}.{gamma0|beta0}
struct TaskEmbeddingConfig {
  int n_layers = 2;       // embedder layers to condition
  Index input_dim = 128;  // dimension of the episode representation
  int hidden_dim = 64;    // width of each FiLM vector
  double gamma0_init = 0.0;
  double beta0_init = 1.0;
};

void init_ten_params(ParameterStore& store, const TaskEmbeddingConfig& cfg, RngStream& rng);

Conditioning ten_forward(ad::TapeD& tape, const ParameterStore& store,
                         const TaskEmbeddingConfig& cfg, ad::VarD episode_representation);

// Sum over layers of gamma0^2 + beta0^2, unweighted; the trainer applies
// lambda_reg.
ad::VarD tae_penalty(ad::TapeD& tape, const ParameterStore& store, int n_layers);

}  // namespace protoglyph
