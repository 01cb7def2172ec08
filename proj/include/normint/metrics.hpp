#pragma once

#include <array>
#include <vector>

#include "normint/domain.hpp"
#include "normint/fields.hpp"
#include "normint/raster.hpp"

namespace normint {

using Normal = std::array<double, 3>;

struct NormalField {
  std::vector<Normal> n;
};

/// p = −n₁/n₃, q = −n₂/n₃. Pixels with n₃ ≤ threshold are reported in
/// `unreliable` (their gradient is set to 0).
GradientField normals_to_gradient(const NormalField& normals, double threshold = 1e-3,
                                  std::vector<std::uint8_t>* unreliable = nullptr);

/// n = (−p, −q, 1) / ‖(−p, −q, 1)‖.
NormalField gradient_to_normals(const GradientField& g);

/// RMSE after removing the mean difference. Throws ConfigError when empty.
double rmse_aligned(const std::vector<double>& z, const std::vector<double>& z_true);

/// Same over the inside pixels of `region`.
double rmse_aligned(const Raster<double>& z, const Raster<double>& z_true,
                    const DomainMask& region);

/// Mean angle in degrees between normals from central differences of z and
/// z_true, over pixels whose four neighbours are inside `region`.
double mae_normals(const Raster<double>& z, const Raster<double>& z_true,
                   const DomainMask& region);

}  // namespace normint
