#include "normint/linalg.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "normint/errors.hpp"
#include "normint/kernels.hpp"

namespace normint {

PreconditionerKind parse_preconditioner(std::string_view name) {
  if (name == "none") return PreconditionerKind::None;
  if (name == "jacobi") return PreconditionerKind::Jacobi;
  if (name == "ic" || name == "incomplete") return PreconditionerKind::IncompleteCholesky;
  throw ConfigError("unknown preconditioner '" + std::string(name) + "'");
}

std::string_view to_string(PreconditionerKind k) {
  switch (k) {
    case PreconditionerKind::None: return "none";
    case PreconditionerKind::Jacobi: return "jacobi";
    case PreconditionerKind::IncompleteCholesky: return "ic";
  }
  return "?";
}

namespace {

class IdentityPre final : public Preconditioner {
 public:
  void apply(const std::vector<double>& r, std::vector<double>& z) const override { z = r; }
};

class JacobiPre final : public Preconditioner {
 public:
  explicit JacobiPre(const SparseMatrix& a) : inv_(a.diag()) {
    for (double& d : inv_) d = d > 0.0 ? 1.0 / d : 1.0;
  }
  void apply(const std::vector<double>& r, std::vector<double>& z) const override {
    z.resize(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) z[i] = inv_[i] * r[i];
  }

 private:
  std::vector<double> inv_;
};

// Incomplete LU with zero fill on the pattern of A, optionally modified
// (dropped fill added to the diagonal). On a symmetric matrix U = D Lᵀ, so
// the preconditioner is symmetric.
class IncompleteCholeskyPre final : public Preconditioner {
 public:
  IncompleteCholeskyPre(const SparseMatrix& a, double relaxation)
      : ptr_(a.row_ptr()), col_(a.col_idx()), val_(a.values()), diag_pos_(a.rows()) {
    const std::size_t n = a.rows();
    for (std::size_t i = 0; i < n; ++i) {
      const auto b = col_.begin() + ptr_[i], e = col_.begin() + ptr_[i + 1];
      const auto it = std::lower_bound(b, e, static_cast<std::int32_t>(i));
      if (it == e || *it != static_cast<std::int32_t>(i))
        throw SolverError("incomplete factorization: missing diagonal entry");
      diag_pos_[i] = static_cast<std::int32_t>(it - col_.begin());
    }
    std::vector<std::int32_t> pos(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::int32_t k = ptr_[i]; k < ptr_[i + 1]; ++k) pos[col_[k]] = k;
      const double orig = val_[diag_pos_[i]];
      for (std::int32_t k = ptr_[i]; k < diag_pos_[i]; ++k) {
        const std::int32_t c = col_[k];
        val_[k] /= val_[diag_pos_[c]];
        const double lik = val_[k];
        for (std::int32_t m = diag_pos_[c] + 1; m < ptr_[c + 1]; ++m) {
          const double upd = lik * val_[m];
          if (pos[col_[m]] >= 0)
            val_[pos[col_[m]]] -= upd;
          else
            val_[diag_pos_[i]] -= relaxation * upd;
        }
      }
      // Pivot floor: keeps the factor usable on semi-definite systems.
      double& piv = val_[diag_pos_[i]];
      if (!(piv > 1e-3 * orig)) piv = orig > 0.0 ? orig : 1.0;
      for (std::int32_t k = ptr_[i]; k < ptr_[i + 1]; ++k) pos[col_[k]] = -1;
    }
  }

  void apply(const std::vector<double>& r, std::vector<double>& z) const override {
    const std::size_t n = r.size();
    z.resize(n);
    // L y = r (unit lower)
    for (std::size_t i = 0; i < n; ++i) {
      double s = r[i];
      for (std::int32_t k = ptr_[i]; k < diag_pos_[i]; ++k) s -= val_[k] * z[col_[k]];
      z[i] = s;
    }
    // U z = y
    for (std::size_t i = n; i-- > 0;) {
      double s = z[i];
      for (std::int32_t k = diag_pos_[i] + 1; k < ptr_[i + 1]; ++k) s -= val_[k] * z[col_[k]];
      z[i] = s / val_[diag_pos_[i]];
    }
  }

 private:
  std::vector<std::int32_t> ptr_;
  std::vector<std::int32_t> col_;
  std::vector<double> val_;
  std::vector<std::int32_t> diag_pos_;
};

}  // namespace

std::unique_ptr<Preconditioner> Preconditioner::build(const SparseMatrix& a,
                                                      const SolverConfig& cfg) {
  switch (cfg.preconditioner) {
    case PreconditionerKind::None: return std::make_unique<IdentityPre>();
    case PreconditionerKind::Jacobi: return std::make_unique<JacobiPre>(a);
    case PreconditionerKind::IncompleteCholesky:
      return std::make_unique<IncompleteCholeskyPre>(a, cfg.relaxation);
  }
  return std::make_unique<IdentityPre>();
}

SolveResult pcg_solve(const SparseMatrix& a, const std::vector<double>& b,
                      const std::vector<double>& x0, const SolverConfig& cfg,
                      const Preconditioner* pre) {
  namespace k = kernels;
  const std::size_t n = b.size();
  if (a.rows() != n || a.cols() != n) throw ConfigError("pcg: matrix/vector size mismatch");
  if (!(cfg.rel_tolerance > 0.0) || cfg.max_iterations < 1)
    throw ConfigError("pcg: invalid solver configuration");

  std::unique_ptr<Preconditioner> owned;
  if (pre == nullptr) {
    owned = Preconditioner::build(a, cfg);
    pre = owned.get();
  }

  SolveResult res;
  res.x = x0.empty() ? std::vector<double>(n, 0.0) : x0;
  if (res.x.size() != n) throw ConfigError("pcg: initial guess size mismatch");

  const double bnorm = k::norm2(b);
  const double scale = bnorm > 0.0 ? bnorm : 1.0;

  std::vector<double> r(n), z(n), p(n), q(n);
  a.multiply(res.x, q);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
  double rel = k::norm2(r) / scale;
  res.residual = rel;
  if (rel <= cfg.rel_tolerance) return res;

  std::vector<double> best = res.x;
  double best_rel = rel;

  pre->apply(r, z);
  p = z;
  double rz = k::dot(r, z);
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    a.multiply(p, q);
    const double pq = k::dot(p, q);
    if (!(pq > 0.0)) {
      // Breakdown: direction in the null space or A not positive definite.
      res.iterations = it;
      break;
    }
    const double alpha = rz / pq;
    k::axpy(alpha, p, res.x);
    k::axpy(-alpha, q, r);
    rel = k::norm2(r) / scale;
    res.iterations = it;
    res.residual = rel;
    if (rel < best_rel) {
      best_rel = rel;
      best = res.x;
    }
    if (rel <= cfg.rel_tolerance) return res;
    pre->apply(r, z);
    const double rz_new = k::dot(r, z);
    k::xpby(z, rz_new / rz, p);
    rz = rz_new;
  }
  throw SolverError("pcg did not converge (relative residual " + std::to_string(best_rel) + ")",
                    std::move(best), best_rel, res.iterations);
}

std::vector<double> direct_solve_spd(const SparseMatrix& a, const std::vector<double>& b) {
  const auto n = static_cast<Eigen::Index>(a.rows());
  if (a.rows() != a.cols() || b.size() != a.rows())
    throw ConfigError("direct solve: size mismatch");
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(a.nnz());
  for (const Triplet& e : a.triplets()) t.emplace_back(e.row, e.col, e.value);
  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(m);
  if (llt.info() != Eigen::Success) throw SolverError("matrix not positive definite");
  const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), n);
  Eigen::VectorXd x = llt.solve(rhs);
  if (llt.info() != Eigen::Success || !x.allFinite())
    throw SolverError("matrix not positive definite");
  return {x.data(), x.data() + n};
}

}  // namespace normint
