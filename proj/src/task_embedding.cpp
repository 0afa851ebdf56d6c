#include "protoglyph/task_embedding.hpp"

#include <cmath>

namespace protoglyph {

using ad::VarD;

namespace {

Mat glorot(Index rows, Index cols, RngStream& rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Mat m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = (2.0 * rng.next_unit() - 1.0) * a;
  return m;
}

void init_predictor(ParameterStore& store, const std::string& net,
                    const TaskEmbeddingConfig& cfg, RngStream& rng) {
  const Index d = cfg.input_dim;
  store.create("tae." + net + ".trunk.w", glorot(d, d, rng));
  store.create("tae." + net + ".trunk.b", Mat::Zero(1, d));
  for (int l = 0; l < cfg.n_layers; ++l) {
    const std::string head = "tae." + net + ".head" + std::to_string(l);
    store.create(head + ".w", glorot(2 * d, cfg.hidden_dim, rng));
    store.create(head + ".b", Mat::Zero(1, cfg.hidden_dim));
  }
}

std::vector<VarD> predictor_forward(ad::TapeD& tape, const ParameterStore& store,
                                    const std::string& net, const TaskEmbeddingConfig& cfg,
                                    VarD x) {
  VarD t = relu(add_row_vector(matmul(x, use_parameter(tape, store, "tae." + net + ".trunk.w")),
                               use_parameter(tape, store, "tae." + net + ".trunk.b")));
  VarD base = concat_cols<Real>({t, x});
  std::vector<VarD> out;
  out.reserve(static_cast<std::size_t>(cfg.n_layers));
  for (int l = 0; l < cfg.n_layers; ++l) {
    const std::string head = "tae." + net + ".head" + std::to_string(l);
    out.push_back(add_row_vector(matmul(base, use_parameter(tape, store, head + ".w")),
                                 use_parameter(tape, store, head + ".b")));
  }
  return out;
}

}  // namespace

void init_ten_params(ParameterStore& store, const TaskEmbeddingConfig& cfg, RngStream& rng) {
  init_predictor(store, "g", cfg, rng);
  init_predictor(store, "h", cfg, rng);
  for (int l = 0; l < cfg.n_layers; ++l) {
    const std::string p = "tae.layer" + std::to_string(l);
    store.create(p + ".gamma0", Mat::Constant(1, 1, cfg.gamma0_init));
    store.create(p + ".beta0", Mat::Constant(1, 1, cfg.beta0_init));
  }
}

Conditioning ten_forward(ad::TapeD& tape, const ParameterStore& store,
                         const TaskEmbeddingConfig& cfg, VarD episode_representation) {
  if (episode_representation.rows() != 1 || episode_representation.cols() != cfg.input_dim)
    throw ad::ContractError("ten_forward: episode representation must be 1 x input_dim");

  const auto shift_out = predictor_forward(tape, store, "g", cfg, episode_representation);
  const auto scale_out = predictor_forward(tape, store, "h", cfg, episode_representation);

  Conditioning cond;
  for (int l = 0; l < cfg.n_layers; ++l) {
    const std::string p = "tae.layer" + std::to_string(l);
    VarD gamma0 = use_parameter(tape, store, p + ".gamma0");
    VarD beta0 = use_parameter(tape, store, p + ".beta0");
    const auto li = static_cast<std::size_t>(l);
    cond.gamma.push_back(shift(broadcast_scale(scale_out[li], gamma0), 1.0));
    cond.beta.push_back(broadcast_scale(shift_out[li], beta0));
  }
  return cond;
}

ad::VarD tae_penalty(ad::TapeD& tape, const ParameterStore& store, int n_layers) {
  VarD total = tape.scalar(0.0);
  for (int l = 0; l < n_layers; ++l) {
    const std::string p = "tae.layer" + std::to_string(l);
    total = total + square(use_parameter(tape, store, p + ".gamma0")) +
            square(use_parameter(tape, store, p + ".beta0"));
  }
  return total;
}

}  // namespace protoglyph
