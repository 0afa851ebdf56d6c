#pragma once

#include <functional>
#include <string>
#include <vector>

#include "protoglyph/params.hpp"

namespace protoglyph {

class VerifierError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A scalar objective over the store. When `with_grad` is set the callable
// must accumulate dL/dParam into the store's gradient slots; when
// `activation_signature` is non-null it must be filled with the tape's relu
// sign fingerprint for the evaluation.
using Objective =
    std::function<double(ParameterStore&, bool with_grad, std::uint64_t* activation_signature)>;

struct GradCheckEntry {
  std::string name;
  double max_rel_err = 0.0;   // over components not excluded at a kink
  int checked = 0;
  int excluded = 0;           // components whose +/- step straddles a relu kink
};

struct GradCheckReport {
  std::vector<GradCheckEntry> per_param;
  double max_rel_err = 0.0;
  std::string worst_param;
  int checked = 0;
  int excluded = 0;
  bool pass = false;
  double step = 0.0, tol = 0.0;

  std::string summary() const;
};

// Central finite differences against the accumulated autodiff gradient.
// Relative error per component is |g_ad - g_fd| / max(1, |g_fd|). Components
// whose perturbed evaluations land on different sides of a relu kink are
// reported as excluded rather than failed: the difference quotient is not a
// derivative estimate across a kink. Throws VerifierError if two evaluations
// of the objective at the same point disagree.
GradCheckReport finite_diff_check(const Objective& f, ParameterStore& store, double step,
                                  double tol);

}  // namespace protoglyph
