#include "protoglyph/gradcheck.hpp"

#include <cmath>
#include <sstream>

namespace protoglyph {

std::string GradCheckReport::summary() const {
  std::ostringstream os;
  os << (pass ? "PASS" : "FAIL") << ", max rel err " << max_rel_err << " (tol " << tol
     << ", step " << step << ", " << checked << " components";
  if (excluded > 0) os << ", " << excluded << " excluded at relu kinks";
  os << ")";
  if (!pass && !worst_param.empty()) os << "; worst: " << worst_param;
  return os.str();
}

GradCheckReport finite_diff_check(const Objective& f, ParameterStore& store, double step,
                                  double tol) {
  GradCheckReport report;
  report.step = step;
  report.tol = tol;

  std::uint64_t sig_a = 0, sig_b = 0;
  const double base_a = f(store, false, &sig_a);
  const double base_b = f(store, false, &sig_b);
  if (base_a != base_b || sig_a != sig_b)
    throw VerifierError("objective is not deterministic: repeated evaluation changed the result");

  store.zero_grads();
  f(store, true, nullptr);

  bool all_ok = true;
  store.for_each([&](const std::string& name, Mat& value, Mat& grad) {
    GradCheckEntry entry;
    entry.name = name;
    for (Index i = 0; i < value.rows(); ++i) {
      for (Index j = 0; j < value.cols(); ++j) {
        const double saved = value(i, j);
        std::uint64_t sig_plus = 0, sig_minus = 0;
        value(i, j) = saved + step;
        const double f_plus = f(store, false, &sig_plus);
        value(i, j) = saved - step;
        const double f_minus = f(store, false, &sig_minus);
        value(i, j) = saved;

        if (sig_plus != sig_minus) {
          entry.excluded++;
          continue;
        }
        const double g_fd = (f_plus - f_minus) / (2.0 * step);
        const double g_ad = grad(i, j);
        const double rel = std::abs(g_ad - g_fd) / std::max(1.0, std::abs(g_fd));
        entry.checked++;
        if (rel > entry.max_rel_err) entry.max_rel_err = rel;
      }
    }
    if (entry.max_rel_err > report.max_rel_err) {
      report.max_rel_err = entry.max_rel_err;
      report.worst_param = name;
    }
    if (entry.max_rel_err > tol) all_ok = false;
    report.checked += entry.checked;
    report.excluded += entry.excluded;
    report.per_param.push_back(std::move(entry));
  });

  report.pass = all_ok;
  return report;
}

}  // namespace protoglyph
