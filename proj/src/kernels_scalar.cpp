#include "normint/kernels.hpp"

#include <cassert>
#include <cmath>

namespace normint::kernels {
namespace {

double dot_scalar(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void xpby_scalar(std::span<const double> x, double beta, std::span<double> y) {
  assert(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + beta * y[i];
}

void spmv_scalar(const CsrView& a, std::span<const double> x, std::span<double> y,
                 std::size_t row_begin, std::size_t row_end) {
  for (std::size_t r = row_begin; r < row_end; ++r) {
    double s = 0.0;
    for (std::int32_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) s += a.vals[k] * x[a.cols[k]];
    y[r] = s;
  }
}

void shrink2_scalar(std::span<const double> sx, std::span<const double> sy, double threshold,
                    std::span<double> rx, std::span<double> ry) {
  for (std::size_t i = 0; i < sx.size(); ++i) {
    const double n = std::sqrt(sx[i] * sx[i] + sy[i] * sy[i]);
    if (n > threshold) {
      const double f = (n - threshold) / n;
      rx[i] = f * sx[i];
      ry[i] = f * sy[i];
    } else {
      rx[i] = 0.0;
      ry[i] = 0.0;
    }
  }
}

}  // namespace

const KernelTable& scalar_table() noexcept {
  static const KernelTable table{"scalar", dot_scalar, axpy_scalar, xpby_scalar, spmv_scalar,
                                 shrink2_scalar};
  return table;
}

}  // namespace normint::kernels
