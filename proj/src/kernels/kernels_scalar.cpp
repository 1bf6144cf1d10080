#include "mvsc/kernels.hpp"

#include <cmath>

namespace mvsc::kernels {
namespace {

void sym_clamp_scalar(const double* a, const double* b, double* out, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) {
    const double v = 0.5 * (a[i] + b[i]);
    out[i] = v > 0.0 ? v : 0.0;
  }
}

double sq_dist_scalar(const double* a, const double* b, std::size_t len) {
  double acc = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double max_abs_scalar(const double* a, std::size_t len) {
  double m = 0.0;
  for (std::size_t i = 0; i < len; ++i) m = std::fmax(m, std::fabs(a[i]));
  return m;
}

double max_abs_diff_scalar(const double* a, const double* b, std::size_t len) {
  double m = 0.0;
  for (std::size_t i = 0; i < len; ++i) m = std::fmax(m, std::fabs(a[i] - b[i]));
  return m;
}

bool all_finite_scalar(const double* a, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i)
    if (!std::isfinite(a[i])) return false;
  return true;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t{sym_clamp_scalar, sq_dist_scalar, max_abs_scalar,
                             max_abs_diff_scalar, all_finite_scalar};
  return t;
}

}  // namespace mvsc::kernels
