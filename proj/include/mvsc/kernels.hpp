#pragma once

// Data-parallel inner loops shared by the solver and the clustering back-end.
//
// Every kernel has a scalar reference implementation; wider variants (AVX2 on
// x86-64, NEON on AArch64) are selected once at runtime. The environment
// variable MVSC_SIMD=scalar forces the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace mvsc::kernels {

enum class Backend { Scalar, Avx2, Neon };

struct KernelTable {
  /// out[i] = max(0.5 * (a[i] + b[i]), 0)
  void (*sym_clamp)(const double* a, const double* b, double* out, std::size_t len);
  /// sum_i (a[i] - b[i])^2
  double (*sq_dist)(const double* a, const double* b, std::size_t len);
  /// max_i |a[i]|
  double (*max_abs)(const double* a, std::size_t len);
  /// max_i |a[i] - b[i]|
  double (*max_abs_diff)(const double* a, const double* b, std::size_t len);
  /// false as soon as any entry is NaN or +-Inf
  bool (*all_finite)(const double* a, std::size_t len);
};

const KernelTable& scalar_table();
#if defined(MVSC_HAVE_AVX2_TU)
const KernelTable& avx2_table();
#endif
#if defined(MVSC_HAVE_NEON_TU)
const KernelTable& neon_table();
#endif

/// Backends usable on this machine, scalar first.
std::span<const Backend> available_backends();
Backend active_backend();
/// Switches the process-wide backend. Throws InvalidArgument if unavailable.
void set_backend(Backend b);
const KernelTable& table(Backend b);
std::string_view backend_name(Backend b);

// Convenience wrappers over the active table.
void sym_clamp(std::span<const double> a, std::span<const double> b, std::span<double> out);
double sq_dist(std::span<const double> a, std::span<const double> b);
double max_abs(std::span<const double> a);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
bool all_finite(std::span<const double> a);

}  // namespace mvsc::kernels
