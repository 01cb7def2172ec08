#include "normint/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace normint {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<Triplet> t, bool drop_zeros) {
  for (const Triplet& e : t) {
    if (e.row < 0 || e.col < 0 || static_cast<std::size_t>(e.row) >= rows ||
        static_cast<std::size_t>(e.col) >= cols)
      throw std::out_of_range("triplet outside matrix bounds");
  }
  // Stable sort keeps the summation order of duplicates equal to insertion
  // order, so repeated builds are bit-identical.
  std::stable_sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseMatrix m(rows, cols);
  m.col_idx_.reserve(t.size());
  m.vals_.reserve(t.size());
  std::size_t k = 0;
  while (k < t.size()) {
    const std::int32_t r = t[k].row, c = t[k].col;
    double s = 0.0;
    for (; k < t.size() && t[k].row == r && t[k].col == c; ++k) s += t[k].value;
    if (drop_zeros && s == 0.0) continue;
    m.col_idx_.push_back(c);
    m.vals_.push_back(s);
    ++m.row_ptr_[r + 1];
  }
  for (std::size_t r = 0; r < rows; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
  return m;
}

SparseMatrix SparseMatrix::diagonal(std::span<const double> d) {
  SparseMatrix m(d.size(), d.size());
  m.col_idx_.resize(d.size());
  m.vals_.assign(d.begin(), d.end());
  for (std::size_t i = 0; i < d.size(); ++i) {
    m.col_idx_[i] = static_cast<std::int32_t>(i);
    m.row_ptr_[i + 1] = static_cast<std::int32_t>(i + 1);
  }
  return m;
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  const std::vector<double> ones(n, 1.0);
  return diagonal(ones);
}

double SparseMatrix::at(std::size_t r, std::size_t c) const {
  const auto b = col_idx_.begin() + row_ptr_[r];
  const auto e = col_idx_.begin() + row_ptr_[r + 1];
  const auto it = std::lower_bound(b, e, static_cast<std::int32_t>(c));
  return (it != e && *it == static_cast<std::int32_t>(c)) ? vals_[it - col_idx_.begin()] : 0.0;
}

std::vector<double> SparseMatrix::diag() const {
  std::vector<double> d(std::min(rows_, cols_));
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = at(i, i);
  return d;
}

kernels::CsrView SparseMatrix::view() const noexcept {
  return {rows_, row_ptr_, col_idx_, vals_};
}

std::vector<double> SparseMatrix::operator*(std::span<const double> x) const {
  std::vector<double> y(rows_);
  multiply(x, y);
  return y;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != cols_ || y.size() != rows_) throw std::invalid_argument("spmv: size mismatch");
  kernels::spmv(view(), x, y);
}

std::vector<double> SparseMatrix::multiply_transposed(std::span<const double> x) const {
  if (x.size() != rows_) throw std::invalid_argument("spmv_t: size mismatch");
  std::vector<double> y(cols_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::int32_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) y[col_idx_[k]] += vals_[k] * x[r];
  return y;
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<Triplet> t;
  t.reserve(nnz());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::int32_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      t.push_back({col_idx_[k], static_cast<std::int32_t>(r), vals_[k]});
  return from_triplets(cols_, rows_, std::move(t));
}

SparseMatrix SparseMatrix::scaled(double s) const {
  SparseMatrix m = *this;
  for (double& v : m.vals_) v *= s;
  return m;
}

SparseMatrix SparseMatrix::row_scaled(std::span<const double> w) const {
  if (w.size() != rows_) throw std::invalid_argument("row_scaled: size mismatch");
  SparseMatrix m = *this;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::int32_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) m.vals_[k] *= w[r];
  return m;
}

std::vector<Triplet> SparseMatrix::triplets() const {
  std::vector<Triplet> t;
  t.reserve(nnz());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::int32_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      t.push_back({static_cast<std::int32_t>(r), col_idx_[k], vals_[k]});
  return t;
}

std::vector<std::vector<double>> SparseMatrix::to_dense() const {
  std::vector<std::vector<double>> d(rows_, std::vector<double>(cols_, 0.0));
  for (const Triplet& e : triplets()) d[e.row][e.col] = e.value;
  return d;
}

bool SparseMatrix::is_symmetric(double tol) const {
  if (rows_ != cols_) return false;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::int32_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      if (std::abs(vals_[k] - at(col_idx_[k], r)) > tol) return false;
  return true;
}

SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: size mismatch");
  std::vector<Triplet> t;
  const auto& ap = a.row_ptr();
  const auto& ac = a.col_idx();
  const auto& av = a.values();
  const auto& bp = b.row_ptr();
  const auto& bc = b.col_idx();
  const auto& bv = b.values();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::int32_t k = ap[i]; k < ap[i + 1]; ++k)
      for (std::int32_t l = bp[ac[k]]; l < bp[ac[k] + 1]; ++l)
        t.push_back({static_cast<std::int32_t>(i), bc[l], av[k] * bv[l]});
  return SparseMatrix::from_triplets(a.rows(), b.cols(), std::move(t));
}

SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b, double alpha, double beta) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("add: size mismatch");
  std::vector<Triplet> t = a.triplets();
  for (Triplet& e : t) e.value *= alpha;
  for (Triplet e : b.triplets()) {
    e.value *= beta;
    t.push_back(e);
  }
  return SparseMatrix::from_triplets(a.rows(), a.cols(), std::move(t));
}

SparseMatrix weighted_gram(const SparseMatrix& d, std::span<const double> w) {
  if (!w.empty() && w.size() != d.rows()) throw std::invalid_argument("gram: size mismatch");
  // Sum over rows r of w_r * d_r d_rᵀ; each row has few entries.
  std::vector<Triplet> t;
  const auto& p = d.row_ptr();
  const auto& c = d.col_idx();
  const auto& v = d.values();
  for (std::size_t r = 0; r < d.rows(); ++r) {
    const double wr = w.empty() ? 1.0 : w[r];
    for (std::int32_t i = p[r]; i < p[r + 1]; ++i)
      for (std::int32_t j = p[r]; j < p[r + 1]; ++j)
        t.push_back({c[i], c[j], wr * v[i] * v[j]});
  }
  return SparseMatrix::from_triplets(d.cols(), d.cols(), std::move(t));
}

void write_matrix_market(std::ostream& out, const SparseMatrix& a) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  out << std::setprecision(17);
  for (const Triplet& e : a.triplets())
    out << e.row + 1 << ' ' << e.col + 1 << ' ' << e.value << '\n';
}

}  // namespace normint
