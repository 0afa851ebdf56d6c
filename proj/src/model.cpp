#include "protoglyph/model.hpp"

namespace protoglyph {

using ad::VarD;

Variant variant_from_string(const std::string& s) {
  if (s == "PN") return Variant::PN;
  if (s == "PN+MU") return Variant::PN_MU;
  if (s == "PN+TAE") return Variant::PN_TAE;
  if (s == "PN+TAE+MU") return Variant::PN_TAE_MU;
  throw ad::ContractError("unknown variant: " + s);
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::PN: return "PN";
    case Variant::PN_MU: return "PN+MU";
    case Variant::PN_TAE: return "PN+TAE";
    case Variant::PN_TAE_MU: return "PN+TAE+MU";
  }
  return "?";
}

bool has_tae(Variant v) { return v == Variant::PN_TAE || v == Variant::PN_TAE_MU; }
bool has_mixup(Variant v) { return v == Variant::PN_MU || v == Variant::PN_TAE_MU; }

ParameterStore init_model_params(const ModelConfig& cfg, std::uint64_t seed) {
  ParameterStore store;
  RngStream rng = RngStream::keyed({rng_tag::init, seed});
  init_embedder_params(store, cfg.embedder, cfg.d_in, rng);
  init_metric_head(store, cfg.alpha_init);
  if (has_tae(cfg.variant)) init_ten_params(store, cfg.ten_config(), rng);
  return store;
}

StagedEpisode stage_episode(const GraphDataset& ds, const Episode& ep, const EpisodeSpec& spec) {
  StagedEpisode staged;
  staged.n_way = spec.n_way;
  staged.k_shot = spec.k_shot;
  staged.n_query = spec.n_query;
  staged.query_labels = ep.query_labels;
  staged.rng_key = ep.rng_key;

  std::vector<int> all = ep.supports;
  all.insert(all.end(), ep.queries.begin(), ep.queries.end());
  staged.full = make_batch(ds, all);
  staged.supports_only = make_batch(ds, ep.supports);
  return staged;
}

namespace {

struct Passes {
  VarD embeddings;  // (N*K + N*Q) x D, supports first
  VarD supports;    // N*K x D
  VarD queries;     // N*Q x D
  VarD prototypes;  // N x D
};

Passes run_passes(ad::TapeD& tape, const ParameterStore& store, const ModelConfig& cfg,
                  const StagedEpisode& ep, bool train_mode, RngStream* dropout_rng) {
  Conditioning cond;
  const bool conditioned = has_tae(cfg.variant);
  if (conditioned) {
    // Pass 1: unconditioned supports give the episode representation.
    VarD sup0 = embed_graphs(tape, store, cfg.embedder, ep.supports_only, nullptr,
                             /*train_mode=*/false, nullptr);
    VarD protos0 = compute_prototypes(tape, sup0, ep.n_way, ep.k_shot);
    VarD p_e = episode_mean(tape, protos0);
    cond = ten_forward(tape, store, cfg.ten_config(), p_e);
  }

  Passes out;
  out.embeddings = embed_graphs(tape, store, cfg.embedder, ep.full,
                                conditioned ? &cond : nullptr, train_mode, dropout_rng);
  const Index n_sup = static_cast<Index>(ep.n_way) * ep.k_shot;
  const Index n_qry = static_cast<Index>(ep.n_way) * ep.n_query;
  std::vector<Index> sup_rows(static_cast<std::size_t>(n_sup));
  std::vector<Index> qry_rows(static_cast<std::size_t>(n_qry));
  for (Index i = 0; i < n_sup; ++i) sup_rows[static_cast<std::size_t>(i)] = i;
  for (Index i = 0; i < n_qry; ++i) qry_rows[static_cast<std::size_t>(i)] = n_sup + i;
  out.supports = select_rows(out.embeddings, std::move(sup_rows));
  out.queries = select_rows(out.embeddings, std::move(qry_rows));
  out.prototypes = compute_prototypes(tape, out.supports, ep.n_way, ep.k_shot);
  return out;
}

}  // namespace

ForwardResult episode_loss(ad::TapeD& tape, const ParameterStore& store, const ModelConfig& cfg,
                           double lambda_mixup, double lambda_reg, const StagedEpisode& ep,
                           bool train_mode) {
  RngStream dropout_rng = RngStream::keyed({rng_tag::dropout, ep.rng_key});
  Passes p = run_passes(tape, store, cfg, ep, train_mode, &dropout_rng);

  VarD alpha = metric_alpha(tape, store);
  VarD distances = scaled_sq_distances(tape, p.queries, p.prototypes, alpha);
  VarD loss = nll_from_distances(tape, distances, ep.query_labels);

  ForwardResult result;
  result.nll = loss.value()(0, 0);
  result.accuracy = accuracy_from_distances(distances.value(), ep.query_labels);

  if (has_mixup(cfg.variant)) {
    RngStream mask_rng = RngStream::keyed({rng_tag::mixup, ep.rng_key});
    VarD mu = mixup_loss(tape, p.supports, p.prototypes, alpha, ep.n_way, ep.k_shot, mask_rng);
    result.mixup_term = mu.value()(0, 0);
    loss = loss + scale(mu, lambda_mixup);
  }
  if (has_tae(cfg.variant)) {
    VarD penalty = tae_penalty(tape, store, cfg.embedder.n_layers);
    result.penalty_term = penalty.value()(0, 0);
    loss = loss + scale(penalty, lambda_reg);
  }

  result.loss = loss;
  result.loss_value = loss.value()(0, 0);
  return result;
}

EvalForward episode_eval(const ParameterStore& store, const ModelConfig& cfg,
                         const StagedEpisode& ep) {
  ad::TapeD tape;
  Passes p = run_passes(tape, store, cfg, ep, /*train_mode=*/false, nullptr);
  VarD alpha = metric_alpha(tape, store);
  VarD distances = scaled_sq_distances(tape, p.queries, p.prototypes, alpha);
  VarD nll = nll_from_distances(tape, distances, ep.query_labels);
  EvalForward out;
  out.nll = nll.value()(0, 0);
  out.accuracy = accuracy_from_distances(distances.value(), ep.query_labels);
  return out;
}

Mat plain_embeddings(const ParameterStore& store, const ModelConfig& cfg,
                     const GraphBatch& batch) {
  ad::TapeD tape;
  VarD emb = embed_graphs(tape, store, cfg.embedder, batch, nullptr, false, nullptr);
  Mat out = emb.value();
  return out;
}

}  // namespace protoglyph
