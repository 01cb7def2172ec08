#pragma once

// Data-parallel inner loops shared by the solvers and the ADMM shrinkage.
//
// Every kernel exists as a scalar reference implementation and, on x86-64,
// as an AVX2/FMA variant. The variant is chosen once per process from CPU
// features; NORMINT_SIMD=scalar forces the reference path. Both variants are
// deterministic for a fixed choice, but they do not round identically (FMA,
// different summation order), so equivalence is tested with tolerances.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace normint::kernels {

/// Read-only view of a CSR matrix, enough for y = A x.
struct CsrView {
  std::size_t rows = 0;
  std::span<const std::int32_t> row_ptr;  // rows + 1
  std::span<const std::int32_t> cols;
  std::span<const double> vals;
};

struct KernelTable {
  std::string_view name;
  double (*dot)(std::span<const double> a, std::span<const double> b);
  // y += alpha * x
  void (*axpy)(double alpha, std::span<const double> x, std::span<double> y);
  // y = x + beta * y
  void (*xpby)(std::span<const double> x, double beta, std::span<double> y);
  // y = A x over rows [row_begin, row_end)
  void (*spmv)(const CsrView& a, std::span<const double> x, std::span<double> y,
               std::size_t row_begin, std::size_t row_end);
  // (rx, ry) = max(|s| - threshold, 0) * s / |s|, zero where s == 0
  void (*shrink2)(std::span<const double> sx, std::span<const double> sy, double threshold,
                  std::span<double> rx, std::span<double> ry);
};

const KernelTable& scalar_table() noexcept;

/// AVX2 table, or nullptr when not compiled in or not supported by the CPU.
const KernelTable* avx2_table() noexcept;

/// The table selected for this process.
const KernelTable& active() noexcept;

/// Number of threads the sparse matrix-vector product may use
/// (NORMINT_THREADS, default 1). Rows are partitioned, so results do not
/// depend on the thread count.
int thread_count() noexcept;

// Convenience wrappers over the active table.
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void xpby(std::span<const double> x, double beta, std::span<double> y);
void spmv(const CsrView& a, std::span<const double> x, std::span<double> y);
void shrink2(std::span<const double> sx, std::span<const double> sy, double threshold,
             std::span<double> rx, std::span<double> ry);

namespace detail {
double dot_avx2(std::span<const double> a, std::span<const double> b);
void axpy_avx2(double alpha, std::span<const double> x, std::span<double> y);
void xpby_avx2(std::span<const double> x, double beta, std::span<double> y);
void spmv_avx2(const CsrView& a, std::span<const double> x, std::span<double> y,
               std::size_t row_begin, std::size_t row_end);
void shrink2_avx2(std::span<const double> sx, std::span<const double> sy, double threshold,
                  std::span<double> rx, std::span<double> ry);
}  // namespace detail

}  // namespace normint::kernels
