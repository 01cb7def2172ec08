#pragma once

// Sparse symmetric solvers: preconditioned conjugate gradient and a direct
// Cholesky factorization.

#include <memory>
#include <string_view>
#include <vector>

#include "normint/sparse.hpp"

namespace normint {

enum class PreconditionerKind { None, Jacobi, IncompleteCholesky };

PreconditionerKind parse_preconditioner(std::string_view name);
std::string_view to_string(PreconditionerKind k);

struct SolverConfig {
  double rel_tolerance = 1e-4;
  int max_iterations = 5000;
  PreconditionerKind preconditioner = PreconditionerKind::IncompleteCholesky;
  // Fraction of dropped fill-in moved to the diagonal (0 = IC(0), 1 = MIC(0)).
  double relaxation = 0.97;
};

struct SolveResult {
  std::vector<double> x;
  int iterations = 0;
  double residual = 0.0;  // relative (or absolute when ‖b‖ = 0)
};

/// Symmetric preconditioner M ≈ A applied as z = M⁻¹ r. Built once and
/// reusable across solves with the same matrix.
class Preconditioner {
 public:
  virtual ~Preconditioner() = default;
  virtual void apply(const std::vector<double>& r, std::vector<double>& z) const = 0;

  static std::unique_ptr<Preconditioner> build(const SparseMatrix& a, const SolverConfig& cfg);
};

/// Throws SolverError (with the best iterate) if the tolerance is not met.
SolveResult pcg_solve(const SparseMatrix& a, const std::vector<double>& b,
                      const std::vector<double>& x0, const SolverConfig& cfg,
                      const Preconditioner* pre = nullptr);

/// Sparse Cholesky. Throws SolverError("matrix not positive definite").
std::vector<double> direct_solve_spd(const SparseMatrix& a, const std::vector<double>& b);

}  // namespace normint
