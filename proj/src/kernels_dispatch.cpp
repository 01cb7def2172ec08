#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <thread>
#include <vector>

#include "normint/kernels.hpp"

namespace normint::kernels {
namespace {

// Below this many rows the thread start-up costs more than the product.
constexpr std::size_t kParallelRowThreshold = 1u << 15;

bool cpu_has_avx2() noexcept {
#if defined(NORMINT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& select_table() noexcept {
  const char* env = std::getenv("NORMINT_SIMD");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return scalar_table();
  if (const KernelTable* t = avx2_table()) return *t;
  return scalar_table();
}

}  // namespace

const KernelTable* avx2_table() noexcept {
#if defined(NORMINT_HAVE_AVX2)
  static const KernelTable table{"avx2", detail::dot_avx2, detail::axpy_avx2,
                                 detail::xpby_avx2, detail::spmv_avx2, detail::shrink2_avx2};
  return cpu_has_avx2() ? &table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() noexcept {
  static const KernelTable& table = select_table();
  return table;
}

int thread_count() noexcept {
  static const int n = [] {
    const char* env = std::getenv("NORMINT_THREADS");
    if (env == nullptr) return 1;
    const int v = std::atoi(env);
    return std::clamp(v, 1, 256);
  }();
  return n;
}

double dot(std::span<const double> a, std::span<const double> b) { return active().dot(a, b); }

double norm2(std::span<const double> a) { return std::sqrt(active().dot(a, a)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x, y);
}

void xpby(std::span<const double> x, double beta, std::span<double> y) {
  active().xpby(x, beta, y);
}

void spmv(const CsrView& a, std::span<const double> x, std::span<double> y) {
  const KernelTable& k = active();
  const int threads = thread_count();
  if (threads <= 1 || a.rows < kParallelRowThreshold) {
    k.spmv(a, x, y, 0, a.rows);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  const std::size_t chunk = (a.rows + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const std::size_t b = std::min(a.rows, chunk * t);
    const std::size_t e = std::min(a.rows, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&k, &a, x, y, b, e] { k.spmv(a, x, y, b, e); });
  }
}

void shrink2(std::span<const double> sx, std::span<const double> sy, double threshold,
             std::span<double> rx, std::span<double> ry) {
  active().shrink2(sx, sy, threshold, rx, ry);
}

}  // namespace normint::kernels
