#include "normint/flatten.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

#include "normint/errors.hpp"

namespace normint {
namespace {

double srgb_to_linear(double c) {
  c /= 255.0;
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

}  // namespace

double srgb_lightness(const Rgb& px) {
  const double y = 0.2126 * srgb_to_linear(px[0]) + 0.7152 * srgb_to_linear(px[1]) +
                   0.0722 * srgb_to_linear(px[2]);
  constexpr double eps = 216.0 / 24389.0, kappa = 24389.0 / 27.0;
  return y > eps ? 116.0 * std::cbrt(y) - 16.0 : kappa * y;
}

Raster<std::uint8_t> select_control_points(const Raster<Rgb>& img, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ConfigError("fraction must lie in (0, 1]");
  const int h = img.height(), w = img.width();
  Raster<double> l(h, w);
  for (int u = 0; u < h; ++u)
    for (int v = 0; v < w; ++v) l(u, v) = srgb_lightness(img(u, v));
  std::vector<double> mag(img.size(), 0.0);
  for (int u = 0; u < h; ++u)
    for (int v = 0; v < w; ++v) {
      const double p = u + 1 < h ? l(u + 1, v) - l(u, v) : 0.0;
      const double q = v + 1 < w ? l(u, v + 1) - l(u, v) : 0.0;
      mag[static_cast<std::size_t>(u) * w + v] = std::hypot(p, q);
    }
  std::vector<std::size_t> order(mag.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return mag[a] > mag[b]; });
  const auto keep = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(mag.size())));
  Raster<std::uint8_t> ctrl(h, w, 0);
  for (std::size_t k = 0; k < keep && k < order.size(); ++k) ctrl.data()[order[k]] = 1;
  return ctrl;
}

FlattenResult flatten_image(const Raster<Rgb>& img, const ControlPointSpec& spec,
                            const MsConfig& ms) {
  if (img.empty()) throw ConfigError("empty image");
  FlattenResult res;
  const bool constant = std::all_of(img.data().begin(), img.data().end(),
                                    [&](const Rgb& px) { return px == img.data()[0]; });
  if (constant) {
    std::cerr << "warning: constant image, nothing to flatten\n";
    res.image = img;
    res.control = Raster<std::uint8_t>(img.height(), img.width(), 0);
    res.unchanged = true;
    return res;
  }
  res.control = select_control_points(img, spec.fraction);
  const int h = img.height(), w = img.width();
  const Domain domain(DomainMask::full(h, w));
  const OperatorSet ops = build_operators(domain);
  const std::size_t n = domain.size();
  res.image = Raster<Rgb>(h, w);

  for (int c = 0; c < 3; ++c) {
    GradientField g = GradientField::zeros(n);
    PriorField prior = PriorField::uniform(n, spec.lambda_off);
    for (std::size_t i = 0; i < n; ++i) {
      const Pixel px = domain.index.pixel(i);
      if (!res.control(px.u, px.v)) continue;
      const double val = img(px.u, px.v)[c];
      if (px.u + 1 < h) g.p[i] = img(px.u + 1, px.v)[c] - val;
      if (px.v + 1 < w) g.q[i] = img(px.u, px.v + 1)[c] - val;
      prior.z0[i] = val;
      prior.lambda[i] = spec.lambda_on;
    }
    const MsResult r = integrate_mumford_shah(domain, ops, g, prior, ms);
    for (std::size_t i = 0; i < n; ++i) {
      const Pixel px = domain.index.pixel(i);
      res.image(px.u, px.v)[c] =
          static_cast<std::uint8_t>(std::clamp(std::lround(r.z[i]), 0L, 255L));
    }
  }
  return res;
}

}  // namespace normint
