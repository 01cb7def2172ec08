#include "normint/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>

#include "normint/errors.hpp"

namespace normint {

SurfaceKind parse_surface_kind(std::string_view name) {
  if (name == "plane") return SurfaceKind::Plane;
  if (name == "smooth_bumps") return SurfaceKind::SmoothBumps;
  if (name == "vase_like") return SurfaceKind::VaseLike;
  if (name == "tent_like") return SurfaceKind::TentLike;
  if (name == "step") return SurfaceKind::Step;
  throw ConfigError("unknown surface kind '" + std::string(name) + "'");
}

std::string_view to_string(SurfaceKind k) {
  switch (k) {
    case SurfaceKind::Plane: return "plane";
    case SurfaceKind::SmoothBumps: return "smooth_bumps";
    case SurfaceKind::VaseLike: return "vase_like";
    case SurfaceKind::TentLike: return "tent_like";
    case SurfaceKind::Step: return "step";
  }
  return "?";
}

namespace {

struct Sample {
  double z, p, q;
};

// MATLAB-style peaks on [-3, 3]² and its partial derivatives.
Sample peaks(double x, double y) {
  const double e1 = std::exp(-x * x - (y + 1) * (y + 1));
  const double e2 = std::exp(-x * x - y * y);
  const double e3 = std::exp(-(x + 1) * (x + 1) - y * y);
  const double a = x / 5 - x * x * x - std::pow(y, 5);
  const double z = 3 * (1 - x) * (1 - x) * e1 - 10 * a * e2 - e3 / 3;
  const double dx = 3 * e1 * (-2 * (1 - x) - 2 * x * (1 - x) * (1 - x)) -
                    10 * e2 * ((0.2 - 3 * x * x) - 2 * x * a) + e3 * 2 * (x + 1) / 3;
  const double dy = 3 * (1 - x) * (1 - x) * e1 * (-2 * (y + 1)) -
                    10 * e2 * (-5 * std::pow(y, 4) - 2 * y * a) + e3 * 2 * y / 3;
  return {z, dy, dx};  // (z, ∂/∂y, ∂/∂x)
}

// Piecewise-linear vase radius as a fraction of the grid width, over the
// normalized height t ∈ [0, 1]. The knots are kinks of the surface.
constexpr std::array<std::array<double, 2>, 4> kVaseProfile{
    {{0.0, 0.14}, {0.25, 0.14}, {0.6, 0.30}, {1.0, 0.20}}};

std::pair<double, double> vase_radius(double t) {  // (r, dr/dt) in fractions
  const auto& prof = kVaseProfile;
  for (std::size_t k = 0; k + 1 < prof.size(); ++k) {
    const auto [t0, r0] = prof[k];
    const auto [t1, r1] = prof[k + 1];
    if (t <= t1 || k + 2 == prof.size()) {
      const double s = (r1 - r0) / (t1 - t0);
      return {r0 + s * (t - t0), s};
    }
  }
  return {0.0, 0.0};
}

void flag_jumps(SyntheticSurface& s, double threshold) {
  // A pixel touches a jump when the depth difference to a neighbour
  // differs from the analytic mean slope by more than the threshold.
  const int h = s.z.height(), w = s.z.width();
  s.near_jump = Raster<std::uint8_t>(h, w, 0);
  for (int u = 0; u < h; ++u)
    for (int v = 0; v < w; ++v) {
      if (u + 1 < h) {
        const double pred = 0.5 * (s.p(u, v) + s.p(u + 1, v));
        if (std::abs(s.z(u + 1, v) - s.z(u, v) - pred) > threshold)
          s.near_jump(u, v) = s.near_jump(u + 1, v) = 1;
      }
      if (v + 1 < w) {
        const double pred = 0.5 * (s.q(u, v) + s.q(u, v + 1));
        if (std::abs(s.z(u, v + 1) - s.z(u, v) - pred) > threshold)
          s.near_jump(u, v) = s.near_jump(u, v + 1) = 1;
      }
    }
}

}  // namespace

SyntheticSurface generate_surface(SurfaceKind kind, int height, int width,
                                  const SurfaceParams& params) {
  if (height < 8 || width < 8) throw ConfigError("synthetic surfaces need at least 8x8 pixels");
  SyntheticSurface s;
  s.kind = kind;
  s.z = Raster<double>(height, width, 0.0);
  s.p = Raster<double>(height, width, 0.0);
  s.q = Raster<double>(height, width, 0.0);
  s.mask = DomainMask::full(height, width);
  DomainMask silhouette(height, width);
  const double h = height, w = width;

  for (int u = 0; u < height; ++u) {
    for (int v = 0; v < width; ++v) {
      Sample x{0.0, 0.0, 0.0};
      switch (kind) {
        case SurfaceKind::Plane:
          x = {u + 2.0 * v, 1.0, 2.0};
          break;
        case SurfaceKind::SmoothBumps: {
          const double sx = 6.0 / (w - 1), sy = 6.0 / (h - 1);
          const Sample pk = peaks(-3.0 + sx * v, -3.0 + sy * u);
          x = {pk.z, pk.p * sy, pk.q * sx};
          break;
        }
        case SurfaceKind::VaseLike: {
          // The background floor rises along u, so the depth jump at the
          // silhouette changes sign from the top of the vase to its foot.
          constexpr double kTilt = 0.3, kBulge = 0.5;
          x = {kTilt * u, kTilt, 0.0};
          const double top = 0.1 * h, bottom = 0.9 * h;
          if (u < top || u > bottom) break;
          const double t = (u - top) / (bottom - top);
          const auto [rf, drf] = vase_radius(t);
          const double r = rf * w, dr = drf * w / (bottom - top);
          const double rmax = 0.30 * w;
          const double d = v - 0.5 * (w - 1);
          if (std::abs(d) >= r) break;
          const double base = 0.14 * h;  // vase depth at the silhouette
          x = {base + kBulge * (r * r - d * d) / rmax, kBulge * 2.0 * r * dr / rmax,
               -kBulge * 2.0 * d / rmax};
          silhouette.set(u, v, true);
          break;
        }
        case SurfaceKind::TentLike: {
          // Roof ridge along u, front edge at u0 is a depth jump.
          const double u0 = std::floor(0.3 * h);
          const double half = 0.25 * w, slope = 0.5;
          const double d = v - 0.5 * (w - 1);
          if (u < u0 || std::abs(d) >= half) break;
          x = {slope * (half - std::abs(d)), 0.0, d > 0 ? -slope : (d < 0 ? slope : 0.0)};
          break;
        }
        case SurfaceKind::Step: {
          // The jump grows along the edge, from jump/h at the top to jump.
          const double c = std::floor(0.5 * w);
          if (v < c) break;
          x = {params.jump * (u + 1) / h, params.jump / h, 0.0};
          break;
        }
      }
      s.z(u, v) = params.scale * x.z;
      s.p(u, v) = params.scale * x.p;
      s.q(u, v) = params.scale * x.q;
    }
  }
  if (kind == SurfaceKind::VaseLike) s.mask = silhouette;
  flag_jumps(s, 0.5 * params.scale);
  return s;
}

GradientField gradient_on(const Domain& domain, const SyntheticSurface& s) {
  return {domain.gather(s.p), domain.gather(s.q)};
}

GradientField add_gaussian_noise(const GradientField& g, const NoiseSpec& spec) {
  if (!(spec.sigma >= 0.0)) throw ConfigError("noise sigma must be non-negative");
  GradientField out = g;
  if (spec.sigma == 0.0) return out;
  double ginf = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    ginf = std::max({ginf, std::abs(g.p[i]), std::abs(g.q[i])});
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> n(0.0, spec.sigma * ginf);
  for (std::size_t i = 0; i < g.size(); ++i) {
    out.p[i] += n(rng);
    out.q[i] += n(rng);
  }
  return out;
}

}  // namespace normint
