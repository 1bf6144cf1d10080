// Built with -mavx2; only reached when the CPU reports AVX2 support.
#include "mvsc/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace mvsc::kernels {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

void sym_clamp_avx2(const double* a, const double* b, double* out, std::size_t len) {
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    const __m256d s = _mm256_mul_pd(half, _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    // max_pd returns the second operand for NaN and for (-0, +0), matching the scalar branch.
    _mm256_storeu_pd(out + i, _mm256_max_pd(s, zero));
  }
  for (; i < len; ++i) {
    const double v = 0.5 * (a[i] + b[i]);
    out[i] = v > 0.0 ? v : 0.0;
  }
}

double sq_dist_avx2(const double* a, const double* b, std::size_t len) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= len; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(d0, d0));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(d1, d1));
  }
  for (; i + 4 <= len; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(d, d));
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < len; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double max_abs_avx2(const double* a, std::size_t len) {
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) m = _mm256_max_pd(abs_pd(_mm256_loadu_pd(a + i)), m);
  double r = hmax(m);
  for (; i < len; ++i) r = std::fmax(r, std::fabs(a[i]));
  return r;
}

double max_abs_diff_avx2(const double* a, const double* b, std::size_t len) {
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    m = _mm256_max_pd(abs_pd(d), m);
  }
  double r = hmax(m);
  for (; i < len; ++i) r = std::fmax(r, std::fabs(a[i] - b[i]));
  return r;
}

bool all_finite_avx2(const double* a, std::size_t len) {
  // x - x is 0 for finite x and NaN for NaN or Inf.
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    const __m256d v = _mm256_loadu_pd(a + i);
    const __m256d eq = _mm256_cmp_pd(_mm256_sub_pd(v, v), zero, _CMP_EQ_OQ);
    if (_mm256_movemask_pd(eq) != 0xF) return false;
  }
  for (; i < len; ++i)
    if (!std::isfinite(a[i])) return false;
  return true;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable t{sym_clamp_avx2, sq_dist_avx2, max_abs_avx2, max_abs_diff_avx2,
                             all_finite_avx2};
  return t;
}

}  // namespace mvsc::kernels
