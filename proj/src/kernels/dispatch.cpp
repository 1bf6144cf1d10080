#include <atomic>
#include <cstdlib>
#include <string>
#include <vector>

#include "mvsc/error.hpp"
#include "mvsc/kernels.hpp"

namespace mvsc::kernels {
namespace {

std::vector<Backend> detect() {
  std::vector<Backend> out{Backend::Scalar};
#if defined(MVSC_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) out.push_back(Backend::Avx2);
#endif
#if defined(MVSC_HAVE_NEON_TU)
  out.push_back(Backend::Neon);  // mandatory on AArch64
#endif
  return out;
}

const std::vector<Backend>& backends() {
  static const std::vector<Backend> b = detect();
  return b;
}

Backend initial_backend() {
  const auto& avail = backends();
  if (const char* env = std::getenv("MVSC_SIMD")) {
    const std::string want(env);
    for (Backend b : avail)
      if (backend_name(b) == want) return b;
    if (want == "scalar") return Backend::Scalar;
  }
  return avail.back();
}

std::atomic<const KernelTable*>& active() {
  static std::atomic<const KernelTable*> t{&table(initial_backend())};
  return t;
}

std::atomic<Backend>& active_id() {
  static std::atomic<Backend> b{initial_backend()};
  return b;
}

}  // namespace

std::span<const Backend> available_backends() { return backends(); }

Backend active_backend() { return active_id().load(std::memory_order_relaxed); }

const KernelTable& table(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return scalar_table();
#if defined(MVSC_HAVE_AVX2_TU)
    case Backend::Avx2:
      return avx2_table();
#endif
#if defined(MVSC_HAVE_NEON_TU)
    case Backend::Neon:
      return neon_table();
#endif
    default:
      throw InvalidArgument("kernel backend not compiled in: " + std::string(backend_name(b)));
  }
}

void set_backend(Backend b) {
  bool ok = false;
  for (Backend a : backends()) ok = ok || a == b;
  if (!ok) throw InvalidArgument("kernel backend unavailable: " + std::string(backend_name(b)));
  active().store(&table(b), std::memory_order_relaxed);
  active_id().store(b, std::memory_order_relaxed);
}

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "unknown";
}

void sym_clamp(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  if (a.size() != b.size() || a.size() != out.size())
    throw InvalidArgument("sym_clamp: length mismatch");
  active().load(std::memory_order_relaxed)->sym_clamp(a.data(), b.data(), out.data(), a.size());
}

double sq_dist(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("sq_dist: length mismatch");
  return active().load(std::memory_order_relaxed)->sq_dist(a.data(), b.data(), a.size());
}

double max_abs(std::span<const double> a) {
  return active().load(std::memory_order_relaxed)->max_abs(a.data(), a.size());
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("max_abs_diff: length mismatch");
  return active().load(std::memory_order_relaxed)->max_abs_diff(a.data(), b.data(), a.size());
}

bool all_finite(std::span<const double> a) {
  return active().load(std::memory_order_relaxed)->all_finite(a.data(), a.size());
}

}  // namespace mvsc::kernels
