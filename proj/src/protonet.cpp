#include "protoglyph/protonet.hpp"

#include <cmath>

namespace protoglyph {

using ad::VarD;

void init_metric_head(ParameterStore& store, double alpha_init) {
  if (!(alpha_init > 0.0)) throw ParameterError("alpha_init must be positive");
  Mat a(1, 1);
  a(0, 0) = std::log(alpha_init);
  store.create(kLogAlphaParam, std::move(a));
}

ad::VarD metric_alpha(ad::TapeD& tape, const ParameterStore& store) {
  return exp(use_parameter(tape, store, kLogAlphaParam));
}

ad::VarD compute_prototypes(ad::TapeD& tape, VarD support_embeddings, int n_way, int k_shot) {
  if (support_embeddings.rows() != static_cast<Index>(n_way) * k_shot)
    throw ad::ContractError("compute_prototypes: expected N*K support rows");
  Mat avg = Mat::Zero(n_way, support_embeddings.rows());
  const Real inv = Real(1) / static_cast<Real>(k_shot);
  for (int n = 0; n < n_way; ++n)
    for (int k = 0; k < k_shot; ++k) avg(n, static_cast<Index>(n) * k_shot + k) = inv;
  return matmul(tape.constant(std::move(avg)), support_embeddings);
}

ad::VarD episode_mean(ad::TapeD& tape, VarD prototypes) {
  Mat avg = Mat::Constant(1, prototypes.rows(), Real(1) / static_cast<Real>(prototypes.rows()));
  return matmul(tape.constant(std::move(avg)), prototypes);
}

ad::VarD scaled_sq_distances(ad::TapeD& tape, VarD x, VarD prototypes, VarD alpha) {
  if (x.cols() != prototypes.cols())
    throw ad::ContractError("scaled_sq_distances: dimension mismatch");
  VarD cross = scale(matmul(x, transpose(prototypes)), -2.0);
  VarD xx = row_sums(square(x));                     // m x 1
  VarD pp = transpose(row_sums(square(prototypes)));  // 1 x N
  VarD plain = add_col_vector(add_row_vector(cross, pp), xx);
  return broadcast_scale(plain, alpha);
}

ad::VarD class_distribution(ad::TapeD& tape, VarD distances) {
  return softmax_rows(scale(distances, -1.0));
  (void)tape;
}

ad::VarD nll_from_distances(ad::TapeD& tape, VarD distances, const std::vector<int>& labels) {
  if (static_cast<Index>(labels.size()) != distances.rows())
    throw ad::ContractError("nll_from_distances: one label per row required");
  VarD log_probs = log_softmax_rows(scale(distances, -1.0));
  Mat one_hot = Mat::Zero(distances.rows(), distances.cols());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= distances.cols())
      throw ad::ContractError("nll_from_distances: label out of range");
    one_hot(static_cast<Index>(i), labels[i]) = 1.0;
  }
  VarD picked = sum_all(cwise_mul(log_probs, tape.constant(std::move(one_hot))));
  return scale(picked, -1.0 / static_cast<Real>(labels.size()));
}

double scaled_sq_l2(const Mat& x, const Mat& p, double alpha) {
  return alpha * (x - p).squaredNorm();
}

Mat pairwise_sq_distances(const Mat& x, const Mat& prototypes) {
  Mat out(x.rows(), prototypes.rows());
  for (Index i = 0; i < x.rows(); ++i)
    for (Index n = 0; n < prototypes.rows(); ++n)
      out(i, n) = (x.row(i) - prototypes.row(n)).squaredNorm();
  return out;
}

Mat softmax_rows_eager(const Mat& m) {
  Mat out = m;
  for (Index i = 0; i < out.rows(); ++i) {
    const Real mx = out.row(i).maxCoeff();
    out.row(i) = (out.row(i).array() - mx).exp();
    out.row(i) /= out.row(i).sum();
  }
  return out;
}

double accuracy_from_distances(const Mat& distances, const std::vector<int>& labels) {
  int correct = 0;
  for (Index i = 0; i < distances.rows(); ++i) {
    Index best = 0;
    for (Index n = 1; n < distances.cols(); ++n)
      if (distances(i, n) < distances(i, best)) best = n;
    if (best == labels[static_cast<std::size_t>(i)]) correct++;
  }
  return static_cast<double>(correct) / static_cast<double>(distances.rows());
}

}  // namespace protoglyph
