#pragma once

// Robust integration with a non-convex Φ-function, minimized by the
// inertial forward-backward scheme (iPiano) with lazy backtracking.

#include <array>
#include <vector>

#include "normint/domain.hpp"
#include "normint/fields.hpp"
#include "normint/operators.hpp"
#include "normint/tv.hpp"

namespace normint {

enum class PhiKind { Log, Rational, Quadratic };

/// Log: log(s² + β²). Rational: s²/(s² + γ²). Quadratic: s² (reference).
struct PhiFunction {
  PhiKind kind = PhiKind::Log;
  double beta = 0.5;
  double gamma = 1.0;

  void validate() const;
};

double phi_eval(const PhiFunction& phi, double s);
double phi_deriv(const PhiFunction& phi, double s);
/// Φ'(s)/s in closed form (finite at s = 0).
double phi_weight(const PhiFunction& phi, double s);
/// Upper bound of Φ'' over s ≥ 0.
double phi_curvature_bound(const PhiFunction& phi);

struct IpianoConfig {
  double alpha1 = 0.0;  // 0: derived from a Lipschitz bound of ∇f
  double alpha2 = 0.8;
  int iterations = 1000;
  int max_halvings = 60;
  int grow_every = 10;  // accepted steps between attempted doublings of α₁
};

/// f(z) = ¼ Σ_{UV} Σ_{Ω^{UV}} Φ(‖∇^{UV} z − g‖).
double f_eval(const TvOperators& tv, const GradientField& g, const PhiFunction& phi,
              const DepthMap& z);
std::vector<double> grad_f(const TvOperators& tv, const GradientField& g,
                           const PhiFunction& phi, const DepthMap& z);
/// g(z) = ‖Λ(z − z⁰)‖² = Σ λ (z − z⁰)².
double prior_energy(const PriorField& prior, const DepthMap& z);

/// argmin_x ½‖x − x̂‖² + α₁ ‖Λ(x − z⁰)‖².
std::vector<double> prox_g(const std::vector<double>& x_hat, double alpha1,
                           const PriorField& prior);

struct NonconvexResult {
  DepthMap z;
  int iterations = 0;
  double alpha1 = 0.0;  // last accepted step
  std::vector<double> energy;  // E_Φ after each iteration; [0] is the start
};

/// Starts from z_init, or from the least-squares solution when empty.
NonconvexResult integrate_nonconvex(const Domain& domain, const OperatorSet& ops,
                                    const GradientField& g, const PriorField& prior,
                                    const PhiFunction& phi, const IpianoConfig& cfg = {},
                                    const DepthMap& z_init = {});

}  // namespace normint
