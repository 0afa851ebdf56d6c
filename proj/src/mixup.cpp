#include "protoglyph/mixup.hpp"

namespace protoglyph {

using ad::VarD;

Mat sample_mask(Index d, RngStream& rng) {
  if (d < 1) throw ad::ContractError("sample_mask: d must be >= 1");
  Mat m(1, d);
  for (Index i = 0; i < d; ++i) m(0, i) = rng.next_bit() ? 1.0 : 0.0;
  return m;
}

MixedEmbedding mix_embeddings(const Mat& s1, const Mat& s2, const Mat& sigma) {
  if (s1.rows() != 1 || s2.rows() != 1 || sigma.rows() != 1 || s1.cols() != s2.cols() ||
      s1.cols() != sigma.cols())
    throw ad::ContractError("mix_embeddings: row vectors of equal dimension required");
  MixedEmbedding out;
  out.s_tilde = sigma.cwiseProduct(s1) + (Mat::Ones(1, sigma.cols()) - sigma).cwiseProduct(s2);
  out.lambda = sigma.mean();
  return out;
}

Mat mixup_target(const Mat& rho1, const Mat& rho2, double lambda) {
  if (rho1.rows() != 1 || rho2.rows() != 1 || rho1.cols() != rho2.cols())
    throw ad::ContractError("mixup_target: distributions must share shape");
  return lambda * rho1 + (1.0 - lambda) * rho2;
}

ad::VarD mixup_loss(ad::TapeD& tape, VarD support_embeddings, VarD prototypes, VarD alpha,
                    int n_way, int k_shot, RngStream& rng) {
  if (n_way < 2) throw ad::ContractError("mixup_loss: needs at least 2 classes");
  const Index d = support_embeddings.cols();
  const double alpha_value = alpha.value()(0, 0);
  const Mat& protos_value = prototypes.value();

  std::vector<VarD> mixed_rows;
  Mat targets(static_cast<Index>(n_way) * (n_way - 1) / 2, n_way);
  Index pair_idx = 0;
  for (int n1 = 0; n1 < n_way; ++n1) {
    for (int n2 = n1 + 1; n2 < n_way; ++n2) {
      const Index k1 = rng.below(k_shot);
      const Index k2 = rng.below(k_shot);
      const Index row1 = static_cast<Index>(n1) * k_shot + k1;
      const Index row2 = static_cast<Index>(n2) * k_shot + k2;

      const Mat sigma = sample_mask(d, rng);
      VarD s1 = select_rows(support_embeddings, {row1});
      VarD s2 = select_rows(support_embeddings, {row2});
      VarD mixed = cwise_mul(s1, tape.constant(sigma)) +
                   cwise_mul(s2, tape.constant(Mat::Ones(1, d) - sigma));
      mixed_rows.push_back(mixed);

      // Constant target: class distributions of the two picked supports,
      // interpolated by the fraction of features kept from the first.
      const Mat d1 = alpha_value *
                     pairwise_sq_distances(support_embeddings.value().row(row1), protos_value);
      const Mat d2 = alpha_value *
                     pairwise_sq_distances(support_embeddings.value().row(row2), protos_value);
      const Mat rho1 = softmax_rows_eager(-d1);
      const Mat rho2 = softmax_rows_eager(-d2);
      targets.row(pair_idx++) = mixup_target(rho1, rho2, sigma.mean());
    }
  }

  VarD mixed = mixed_rows.size() == 1 ? mixed_rows.front() : concat_rows(mixed_rows);
  VarD distances = scaled_sq_distances(tape, mixed, prototypes, alpha);
  VarD rho = class_distribution(tape, distances);
  VarD gap = rho - tape.constant(std::move(targets));
  return scale(sum_all(square(gap)), 1.0 / static_cast<double>(pair_idx));
}

}  // namespace protoglyph
