#pragma once

// Piecewise-constant image approximation from sparse control points,
// reconstructed per channel with the Mumford–Shah integrator.

#include <cstdint>
#include <vector>

#include "normint/image_io.hpp"
#include "normint/mumford_shah.hpp"

namespace normint {

struct ControlPointSpec {
  double fraction = 0.10;
  double lambda_on = 10.0;
  double lambda_off = 1e-9;
};

/// CIE-LAB lightness L* (0..100) from 8-bit sRGB, D65 white.
double srgb_lightness(const Rgb& px);

/// Top `fraction` of pixels by lightness-gradient magnitude (forward
/// differences, zero on the last row/column). Ties keep raster order.
Raster<std::uint8_t> select_control_points(const Raster<Rgb>& img, double fraction);

struct FlattenResult {
  Raster<Rgb> image;
  Raster<std::uint8_t> control;
  bool unchanged = false;  // constant input, returned as is
};

FlattenResult flatten_image(const Raster<Rgb>& img, const ControlPointSpec& spec,
                            const MsConfig& ms);

}  // namespace normint
