#pragma once

// Anisotropic-diffusion integration: weighted least squares whose weights
// depend on the current depth estimate, solved by a fixed point.

#include <array>
#include <string_view>
#include <vector>

#include "normint/domain.hpp"
#include "normint/fields.hpp"
#include "normint/linalg.hpp"
#include "normint/operators.hpp"

namespace normint {

enum class DiffusionVariant { PeronaMalik, Statistical, Scaled };

DiffusionVariant parse_diffusion_variant(std::string_view name);

struct DiffusionConfig {
  double mu = 0.2;
  double nu = 10.0;
  int iterations = 50;
  DiffusionVariant variant = DiffusionVariant::Scaled;
  double change_tol = 1e-6;  // relative ‖z_{k+1} − z_k‖ / ‖z_k‖
  SolverConfig fallback{.rel_tolerance = 1e-10, .max_iterations = 20000};
};

/// Per quadrant k (order of kQuadrants): weight a on the u-term and b on
/// the v-term, one value per linear index.
struct DiffusionWeights {
  std::array<std::vector<double>, 4> a;
  std::array<std::vector<double>, 4> b;

  static DiffusionWeights ones(std::size_t n);
};

/// Single-pixel weight formula shared by compute_weights and the tests.
double diffusion_weight(double data, double du, double dv, const DiffusionConfig& cfg);

DiffusionWeights compute_weights(const Domain& domain, const OperatorSet& ops,
                                 const DepthMap& z, const GradientField& g,
                                 const DiffusionConfig& cfg);

/// E_PM with frozen weights; fidelity rows restricted to each sub-domain.
double surrogate_energy(const Domain& domain, const OperatorSet& ops, const GradientField& g,
                        const PriorField& prior, const DiffusionWeights& w, const DepthMap& z);

/// Normal equations of the frozen-weight objective.
QuadraticSystem build_weighted_system(const Domain& domain, const OperatorSet& ops,
                                      const GradientField& g, const PriorField& prior,
                                      const DiffusionWeights& w);

/// Exact minimizer for frozen weights. `used_fallback` reports a PCG fallback.
DepthMap weighted_ls_step(const Domain& domain, const OperatorSet& ops, const DepthMap& z_k,
                          const GradientField& g, const PriorField& prior,
                          const DiffusionWeights& w, const DiffusionConfig& cfg,
                          bool* used_fallback = nullptr);

struct AnisotropicResult {
  DepthMap z;
  DiffusionWeights weights;  // weights used in the last step
  int iterations = 0;
  // Frozen-weight energy before and after each step.
  std::vector<double> surrogate_before;
  std::vector<double> surrogate_after;
  int fallbacks = 0;
};

/// Starts from z_init, or from the least-squares solution when empty.
AnisotropicResult integrate_anisotropic(const Domain& domain, const OperatorSet& ops,
                                        const GradientField& g, const PriorField& prior,
                                        const DiffusionConfig& cfg = {},
                                        const DepthMap& z_init = {});

}  // namespace normint
