#pragma once

// Compressed sparse row matrices with deterministic assembly.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "normint/kernels.hpp"

namespace normint {

struct Triplet {
  std::int32_t row;
  std::int32_t col;
  double value;
};

class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols);  // all zero

  /// Sorts by (row, col) and sums duplicates. Entries that sum to exactly
  /// zero are kept unless drop_zeros is set.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    std::vector<Triplet> triplets, bool drop_zeros = false);
  static SparseMatrix diagonal(std::span<const double> d);
  static SparseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return vals_.size(); }

  const std::vector<std::int32_t>& row_ptr() const noexcept { return row_ptr_; }
  const std::vector<std::int32_t>& col_idx() const noexcept { return col_idx_; }
  const std::vector<double>& values() const noexcept { return vals_; }
  std::vector<double>& values() noexcept { return vals_; }

  /// Entry (r, c); zero when not stored.
  double at(std::size_t r, std::size_t c) const;
  std::vector<double> diag() const;
  std::size_t row_nnz(std::size_t r) const { return row_ptr_[r + 1] - row_ptr_[r]; }

  kernels::CsrView view() const noexcept;

  std::vector<double> operator*(std::span<const double> x) const;
  void multiply(std::span<const double> x, std::span<double> y) const;
  /// y = Aᵀ x without forming the transpose.
  std::vector<double> multiply_transposed(std::span<const double> x) const;

  SparseMatrix transpose() const;
  SparseMatrix scaled(double s) const;
  /// Scales row i by w[i].
  SparseMatrix row_scaled(std::span<const double> w) const;

  std::vector<Triplet> triplets() const;
  std::vector<std::vector<double>> to_dense() const;

  /// Exact (tol = 0) or tolerant entry-wise symmetry.
  bool is_symmetric(double tol = 0.0) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int32_t> row_ptr_{0};
  std::vector<std::int32_t> col_idx_;
  std::vector<double> vals_;
};

SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b);
/// alpha * a + beta * b
SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b, double alpha = 1.0,
                 double beta = 1.0);

/// Dᵀ diag(w) D; w empty means all ones.
SparseMatrix weighted_gram(const SparseMatrix& d, std::span<const double> w = {});

/// MatrixMarket coordinate (real general) dump, 1-based indices.
void write_matrix_market(std::ostream& out, const SparseMatrix& a);

}  // namespace normint
