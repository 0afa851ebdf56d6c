#pragma once

#include "protoglyph/embedder.hpp"
#include "protoglyph/episodes.hpp"
#include "protoglyph/mixup.hpp"
#include "protoglyph/protonet.hpp"
#include "protoglyph/task_embedding.hpp"

namespace protoglyph {

enum class Variant { PN, PN_MU, PN_TAE, PN_TAE_MU };

Variant variant_from_string(const std::string& s);
std::string to_string(Variant v);
bool has_tae(Variant v);
bool has_mixup(Variant v);

struct ModelConfig {
  EmbedderConfig embedder;
  Variant variant = Variant::PN;
  double alpha_init = 7.5;
  double gamma0_init = 0.0;
  double beta0_init = 1.0;
  Index d_in = 1;

  TaskEmbeddingConfig ten_config() const {
    return TaskEmbeddingConfig{embedder.n_layers, embedder.output_dim(), embedder.hidden_dim,
                               gamma0_init, beta0_init};
  }
};

// Creates exactly the parameters the variant trains: embedder and metric head
// always, the TEN only when the variant conditions on the task.
ParameterStore init_model_params(const ModelConfig& cfg, std::uint64_t seed);

// An episode staged for the forward pass: one batch with the N*K supports
// first and the N*Q queries after, plus a supports-only batch for the
// unconditioned first pass of the task embedding.
struct StagedEpisode {
  GraphBatch full;
  GraphBatch supports_only;
  std::vector<int> classes;  // contiguous class ids, episode order
  std::vector<int> query_labels;
  int n_way = 0, k_shot = 0, n_query = 0;
  std::uint64_t rng_key = 0;
};

StagedEpisode stage_episode(const GraphDataset& ds, const Episode& ep, const EpisodeSpec& spec);

struct ForwardResult {
  ad::VarD loss;          // total training loss on the tape
  double loss_value = 0;
  double nll = 0;
  double accuracy = 0;    // fraction of queries whose nearest prototype is correct
  double mixup_term = 0;  // unweighted L_MU; 0 when inactive
  double penalty_term = 0;
};

// Full variant forward. Task conditioning runs a first unconditioned pass
// over the supports to obtain the episode representation, then a second pass
// over supports and queries with the FiLM vectors applied; prototypes and
// distances come from the second pass. Inactive variant terms contribute an
// exact zero and touch no parameters.
ForwardResult episode_loss(ad::TapeD& tape, const ParameterStore& store, const ModelConfig& cfg,
                           double lambda_mixup, double lambda_reg, const StagedEpisode& ep,
                           bool train_mode);

// Evaluation pass: dropout off, mixup off; conditioning active per variant.
struct EvalForward {
  double nll = 0;
  double accuracy = 0;
};
EvalForward episode_eval(const ParameterStore& store, const ModelConfig& cfg,
                         const StagedEpisode& ep);

// Graph embeddings outside any episode (no conditioning, eval mode), one row
// per graph. Used by the analytics paths.
Mat plain_embeddings(const ParameterStore& store, const ModelConfig& cfg,
                     const GraphBatch& batch);

// Evaluation-mode embeddings of one episode, conditioning active per variant.
struct EpisodeEmbeddings {
  Mat supports;    // N*K x D, class-major
  Mat queries;     // N*Q x D, class-major
  Mat prototypes;  // N x D
};
EpisodeEmbeddings episode_embeddings(const ParameterStore& store, const ModelConfig& cfg,
                                     const StagedEpisode& ep);

}  // namespace protoglyph
