#pragma once

// Mumford–Shah integration through the Ambrosio–Tortorelli relaxation:
// block-coordinate descent over the depth and four directional indicator
// fields.

#include <array>
#include <vector>

#include "normint/domain.hpp"
#include "normint/fields.hpp"
#include "normint/linalg.hpp"
#include "normint/operators.hpp"

namespace normint {

struct MsConfig {
  double mu = 45.0;
  double epsilon = 0.1;
  int iterations = 50;
  SolverConfig solver{.rel_tolerance = 1e-8,
                      .max_iterations = 500,
                      .preconditioner = PreconditionerKind::None};
};

/// Indexed by dir_index(Dir): u+, u−, v+, v−.
struct IndicatorFields {
  std::array<std::vector<double>, 4> w;

  static IndicatorFields ones(std::size_t n);
  /// Pixel-wise minimum over the four fields.
  std::vector<double> edge_map() const;
};

double at_energy(const Domain& domain, const OperatorSet& ops, const DepthMap& z,
                 const IndicatorFields& w, const GradientField& g, const PriorField& prior,
                 const MsConfig& cfg);

/// Exact minimizer in z with w frozen (CG warm-started from z_k).
DepthMap ms_z_update(const Domain& domain, const OperatorSet& ops, const DepthMap& z_k,
                     const IndicatorFields& w, const GradientField& g,
                     const PriorField& prior, const MsConfig& cfg);

/// Exact minimizer in the field for direction d, everything else frozen.
std::vector<double> ms_w_update(const Domain& domain, const OperatorSet& ops, Dir d,
                                const DepthMap& z, const std::vector<double>& w_k,
                                const GradientField& g, const MsConfig& cfg);

struct MsResult {
  DepthMap z;
  IndicatorFields w;
  int iterations = 0;
  std::vector<double> energy;  // initial value, then after every sub-update
  int unconverged_solves = 0;
};

/// Starts from z_init (least squares when empty) and w ≡ 1.
MsResult integrate_mumford_shah(const Domain& domain, const OperatorSet& ops,
                                const GradientField& g, const PriorField& prior,
                                const MsConfig& cfg = {}, const DepthMap& z_init = {});

}  // namespace normint
