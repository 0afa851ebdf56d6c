#pragma once

#include <vector>

#include "protoglyph/autodiff.hpp"
#include "protoglyph/params.hpp"

namespace protoglyph {

// The metric head owns a single learnable temperature. alpha = exp(log_alpha)
// keeps it positive without clipping; `head.log_alpha` is initialized to
// log(alpha_init).
inline constexpr const char* kLogAlphaParam = "head.log_alpha";

void init_metric_head(ParameterStore& store, double alpha_init);
ad::VarD metric_alpha(ad::TapeD& tape, const ParameterStore& store);

// Row n = mean of that class's K support embeddings. Supports are class-major:
// rows [n*K, (n+1)*K).
ad::VarD compute_prototypes(ad::TapeD& tape, ad::VarD support_embeddings, int n_way, int k_shot);

// Mean of the prototype rows; the episode representation fed to the TEN.
ad::VarD episode_mean(ad::TapeD& tape, ad::VarD prototypes);

// d_alpha(x, p) = alpha * |x - p|^2 for every row of `x` against every row of
// `prototypes`; result is x.rows() x n_way.
ad::VarD scaled_sq_distances(ad::TapeD& tape, ad::VarD x, ad::VarD prototypes, ad::VarD alpha);

// rho = softmax over the negated scaled distances, one row per query.
ad::VarD class_distribution(ad::TapeD& tape, ad::VarD distances);

// Mean negative log-probability of the true classes, via fused log-softmax of
// the negated distances.
ad::VarD nll_from_distances(ad::TapeD& tape, ad::VarD distances, const std::vector<int>& labels);

// ---- eager (value-only) counterparts ----------------------------------------

double scaled_sq_l2(const Mat& x, const Mat& p, double alpha);
Mat pairwise_sq_distances(const Mat& x, const Mat& prototypes);
Mat softmax_rows_eager(const Mat& m);

// Fraction of rows whose nearest prototype (smallest distance, lowest index on
// ties) matches the label.
double accuracy_from_distances(const Mat& distances, const std::vector<int>& labels);

}  // namespace protoglyph
