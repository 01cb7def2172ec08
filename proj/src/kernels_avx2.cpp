// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include <cassert>
#include <cmath>

#include "normint/kernels.hpp"

namespace normint::kernels::detail {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double dot_avx2(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  const std::size_t n = a.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(&a[i]), _mm256_loadu_pd(&b[i]), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(&a[i + 4]), _mm256_loadu_pd(&b[i + 4]), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(&a[i]), _mm256_loadu_pd(&b[i]), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_avx2(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  const std::size_t n = x.size();
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_fmadd_pd(va, _mm256_loadu_pd(&x[i]), _mm256_loadu_pd(&y[i]));
    _mm256_storeu_pd(&y[i], r);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void xpby_avx2(std::span<const double> x, double beta, std::span<double> y) {
  assert(x.size() == y.size());
  const std::size_t n = x.size();
  const __m256d vb = _mm256_set1_pd(beta);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_fmadd_pd(vb, _mm256_loadu_pd(&y[i]), _mm256_loadu_pd(&x[i]));
    _mm256_storeu_pd(&y[i], r);
  }
  for (; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void spmv_avx2(const CsrView& a, std::span<const double> x, std::span<double> y,
               std::size_t row_begin, std::size_t row_end) {
  const double* xs = x.data();
  for (std::size_t r = row_begin; r < row_end; ++r) {
    std::int32_t k = a.row_ptr[r];
    const std::int32_t end = a.row_ptr[r + 1];
    __m256d acc = _mm256_setzero_pd();
    for (; k + 4 <= end; k += 4) {
      const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(&a.cols[k]));
      const __m256d xv = _mm256_i32gather_pd(xs, idx, 8);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(&a.vals[k]), xv, acc);
    }
    double s = hsum(acc);
    for (; k < end; ++k) s += a.vals[k] * xs[a.cols[k]];
    y[r] = s;
  }
}

void shrink2_avx2(std::span<const double> sx, std::span<const double> sy, double threshold,
                  std::span<double> rx, std::span<double> ry) {
  const std::size_t n = sx.size();
  const __m256d t = _mm256_set1_pd(threshold);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(&sx[i]);
    const __m256d y = _mm256_loadu_pd(&sy[i]);
    const __m256d nrm = _mm256_sqrt_pd(_mm256_fmadd_pd(x, x, _mm256_mul_pd(y, y)));
    const __m256d keep = _mm256_cmp_pd(nrm, t, _CMP_GT_OQ);
    // Lanes with nrm == 0 produce NaN here and are masked out below.
    const __m256d f = _mm256_and_pd(keep, _mm256_div_pd(_mm256_sub_pd(nrm, t), nrm));
    _mm256_storeu_pd(&rx[i], _mm256_mul_pd(f, x));
    _mm256_storeu_pd(&ry[i], _mm256_mul_pd(f, y));
  }
  for (; i < n; ++i) {
    const double nrm = std::sqrt(sx[i] * sx[i] + sy[i] * sy[i]);
    const double f = nrm > threshold ? (nrm - threshold) / nrm : 0.0;
    rx[i] = f * sx[i];
    ry[i] = f * sy[i];
  }
}

}  // namespace normint::kernels::detail
