#pragma once

// Synthetic surfaces with analytic gradients, and gradient noise.

#include <cstdint>
#include <string_view>

#include "normint/domain.hpp"
#include "normint/fields.hpp"
#include "normint/raster.hpp"

namespace normint {

enum class SurfaceKind { Plane, SmoothBumps, VaseLike, TentLike, Step };

SurfaceKind parse_surface_kind(std::string_view name);
std::string_view to_string(SurfaceKind k);

struct SurfaceParams {
  double scale = 1.0;  // multiplies depth and gradient
  double jump = 10.0;  // step: height reached at the far end of the edge
};

/// Depth and gradient sampled on the full grid. `mask` is the object
/// silhouette (vase_like) or the whole grid. `near_jump` flags pixels that
/// touch a depth discontinuity.
struct SyntheticSurface {
  SurfaceKind kind = SurfaceKind::Plane;
  Raster<double> z;
  Raster<double> p;  // ∂z/∂u
  Raster<double> q;  // ∂z/∂v
  DomainMask mask;
  Raster<std::uint8_t> near_jump;
};

/// Throws ConfigError when height or width is below 8.
SyntheticSurface generate_surface(SurfaceKind kind, int height, int width,
                                  const SurfaceParams& params = {});

/// Gather p and q over the domain.
GradientField gradient_on(const Domain& domain, const SyntheticSurface& s);

struct NoiseSpec {
  double sigma = 0.0;  // fraction of ‖g‖∞
  std::uint64_t seed = 0;
};

/// g + N(0, (σ‖g‖∞)²), deterministic for a given seed.
GradientField add_gaussian_noise(const GradientField& g, const NoiseSpec& spec);

}  // namespace normint
