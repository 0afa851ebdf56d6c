#pragma once

#include "protoglyph/protonet.hpp"
#include "protoglyph/rng.hpp"

namespace protoglyph {

// Each component drawn independently Bernoulli(0.5); 1 selects the feature
// from the first sample.
Mat sample_mask(Index d, RngStream& rng);

// s_tilde = sigma * s1 + (1 - sigma) * s2, lambda = mean(sigma).
struct MixedEmbedding {
  Mat s_tilde;
  double lambda = 0.0;
};
MixedEmbedding mix_embeddings(const Mat& s1, const Mat& s2, const Mat& sigma);

// rho_tilde = lambda * rho1 + (1 - lambda) * rho2.
Mat mixup_target(const Mat& rho1, const Mat& rho2, double lambda);

// Gated latent mixup loss over one episode. For every unordered class pair
// one support per class is drawn; the pair's gated mix is classified against
// the episode prototypes and pulled toward the interpolated target
// distribution. Targets are constants: gradients flow only through the class
// distribution of the mixed embedding (and the mix itself into the two
// support rows).
//
// L = mean over pairs of |rho(s_tilde) - rho_tilde|^2.
ad::VarD mixup_loss(ad::TapeD& tape, ad::VarD support_embeddings, ad::VarD prototypes,
                    ad::VarD alpha, int n_way, int k_shot, RngStream& rng);

}  // namespace protoglyph
