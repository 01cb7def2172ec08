#pragma once

#include "normint/domain.hpp"
#include "normint/fields.hpp"
#include "normint/linalg.hpp"
#include "normint/operators.hpp"

namespace normint {

struct QuadraticResult {
  DepthMap z;
  int iterations = 0;
  double residual = 0.0;
};

/// Least-squares integration: solves (L + Λ²) z = D_u p + D_v q + Λ² z⁰,
/// starting from z⁰. Components with λ ≡ 0 get the mean of z⁰ over them.
QuadraticResult integrate_quadratic(const Domain& domain, const OperatorSet& ops,
                                    const GradientField& g, const PriorField& prior,
                                    const SolverConfig& cfg = {});

/// Convenience overload that builds the operators.
QuadraticResult integrate_quadratic(const Domain& domain, const GradientField& g,
                                    const PriorField& prior, const SolverConfig& cfg = {});

/// Shift each connected component with zero total λ so its mean matches z⁰.
void fix_free_components(const Domain& domain, const PriorField& prior, DepthMap& z);

}  // namespace normint
