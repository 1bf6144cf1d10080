#include "mvsc/kernels.hpp"

#include <arm_neon.h>

#include <cmath>

namespace mvsc::kernels {
namespace {

void sym_clamp_neon(const double* a, const double* b, double* out, std::size_t len) {
  const float64x2_t half = vdupq_n_f64(0.5);
  const float64x2_t zero = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    const float64x2_t s = vmulq_f64(half, vaddq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    // v > 0 ? v : 0, NaN and -0 map to +0 like the scalar path
    const uint64x2_t pos = vcgtq_f64(s, zero);
    vst1q_f64(out + i, vbslq_f64(pos, s, zero));
  }
  for (; i < len; ++i) {
    const double v = 0.5 * (a[i] + b[i]);
    out[i] = v > 0.0 ? v : 0.0;
  }
}

double sq_dist_neon(const double* a, const double* b, std::size_t len) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    const float64x2_t d0 = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    const float64x2_t d1 = vsubq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    acc0 = vaddq_f64(acc0, vmulq_f64(d0, d0));
    acc1 = vaddq_f64(acc1, vmulq_f64(d1, d1));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < len; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double max_abs_neon(const double* a, std::size_t len) {
  float64x2_t m = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) m = vmaxnmq_f64(m, vabsq_f64(vld1q_f64(a + i)));
  double r = vmaxnmvq_f64(m);
  for (; i < len; ++i) r = std::fmax(r, std::fabs(a[i]));
  return r;
}

double max_abs_diff_neon(const double* a, const double* b, std::size_t len) {
  float64x2_t m = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2)
    m = vmaxnmq_f64(m, vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  double r = vmaxnmvq_f64(m);
  for (; i < len; ++i) r = std::fmax(r, std::fabs(a[i] - b[i]));
  return r;
}

bool all_finite_neon(const double* a, std::size_t len) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    const float64x2_t v = vld1q_f64(a + i);
    const uint64x2_t ok = vceqq_f64(vsubq_f64(v, v), zero);
    if ((vgetq_lane_u64(ok, 0) & vgetq_lane_u64(ok, 1)) == 0) return false;
  }
  for (; i < len; ++i)
    if (!std::isfinite(a[i])) return false;
  return true;
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable t{sym_clamp_neon, sq_dist_neon, max_abs_neon, max_abs_diff_neon,
                             all_finite_neon};
  return t;
}

}  // namespace mvsc::kernels
