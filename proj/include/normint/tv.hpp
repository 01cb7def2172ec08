#pragma once

// Total-variation-like integration solved by ADMM with one auxiliary
// 2-vector field per gradient discretization (U, V).

#include <array>
#include <optional>
#include <vector>

#include "normint/domain.hpp"
#include "normint/fields.hpp"
#include "normint/linalg.hpp"
#include "normint/operators.hpp"

namespace normint {

struct TvConfig {
  double alpha = 1.0;
  int iterations = 1000;
  // Early exit when the summed primal residual drops below tol * |Ω|.
  double residual_tol = 1e-6;
  SolverConfig solver{.rel_tolerance = 1e-6};
};

/// Generalized shrinkage: max(‖s‖ − 4/α, 0) s/‖s‖, zero at s = 0.
std::array<double, 2> tv_shrinkage(std::array<double, 2> s, double alpha);

/// Per-quadrant operators restricted to Ω^{UV}.
struct TvOperators {
  std::array<SparseMatrix, 4> du;  // D_u^U with rows outside Ω^{UV} removed
  std::array<SparseMatrix, 4> dv;  // D_v^V likewise
  std::array<std::vector<std::int32_t>, 4> members;
};

TvOperators build_tv_operators(const Domain& domain, const OperatorSet& ops);

/// A_TV = α/8 Σ_{UV} [D_u^Uᵀ D_u^U + D_v^Vᵀ D_v^V] + Λ² over Ω^{UV} rows.
SparseMatrix build_tv_matrix(const TvOperators& tv, const PriorField& prior, double alpha);

/// ¼ Σ_{UV} Σ_{Ω^{UV}} ‖∇^{UV} z − g‖ + Σ λ (z − z⁰)².
double tv_energy(const TvOperators& tv, const GradientField& g, const PriorField& prior,
                 const DepthMap& z);

struct AdmmState {
  DepthMap z;
  // Compacted over members[k]: auxiliary r and scaled dual b, u and v parts.
  std::array<std::vector<double>, 4> ru, rv, bu, bv;
  int iteration = 0;

  static AdmmState zeros(const TvOperators& tv, DepthMap z);
};

/// One z-update: solves A_TV z = b_TV(state), warm-started from state.z.
DepthMap tv_z_update(const AdmmState& state, const TvOperators& tv, const SparseMatrix& a_tv,
                     const Preconditioner* pre, const GradientField& g, const PriorField& prior,
                     const TvConfig& cfg);

struct TvResult {
  DepthMap z;
  int iterations = 0;
  std::vector<double> primal_residual;  // per iteration, summed norms
  std::vector<double> energy;           // tv_energy per iteration
};

/// Starts from z_init, or from the least-squares solution when empty.
TvResult integrate_tv(const Domain& domain, const OperatorSet& ops, const GradientField& g,
                      const PriorField& prior, const TvConfig& cfg = {},
                      const DepthMap& z_init = {});

}  // namespace normint
