#include "normint/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "normint/errors.hpp"

namespace normint {

GradientField normals_to_gradient(const NormalField& normals, double threshold,
                                  std::vector<std::uint8_t>* unreliable) {
  const std::size_t n = normals.n.size();
  GradientField g = GradientField::zeros(n);
  if (unreliable != nullptr) unreliable->assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const Normal& v = normals.n[i];
    if (!(v[2] > threshold)) {
      if (unreliable != nullptr) (*unreliable)[i] = 1;
      continue;
    }
    g.p[i] = -v[0] / v[2];
    g.q[i] = -v[1] / v[2];
  }
  return g;
}

NormalField gradient_to_normals(const GradientField& g) {
  NormalField out;
  out.n.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double len = std::sqrt(g.p[i] * g.p[i] + g.q[i] * g.q[i] + 1.0);
    out.n[i] = {-g.p[i] / len, -g.q[i] / len, 1.0 / len};
  }
  return out;
}

double rmse_aligned(const std::vector<double>& z, const std::vector<double>& z_true) {
  if (z.empty() || z.size() != z_true.size()) throw ConfigError("rmse: empty or mismatched input");
  double mean = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) mean += z[i] - z_true[i];
  mean /= static_cast<double>(z.size());
  double s = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double d = z[i] - z_true[i] - mean;
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(z.size()));
}

double rmse_aligned(const Raster<double>& z, const Raster<double>& z_true,
                    const DomainMask& region) {
  if (!z.same_shape(z_true) || !z.same_shape(region.height(), region.width()))
    throw ConfigError("rmse: raster shapes differ");
  std::vector<double> a, b;
  for (int u = 0; u < z.height(); ++u)
    for (int v = 0; v < z.width(); ++v)
      if (region.inside(u, v)) {
        a.push_back(z(u, v));
        b.push_back(z_true(u, v));
      }
  return rmse_aligned(a, b);
}

double mae_normals(const Raster<double>& z, const Raster<double>& z_true,
                   const DomainMask& region) {
  if (!z.same_shape(z_true) || !z.same_shape(region.height(), region.width()))
    throw ConfigError("mae: raster shapes differ");
  const auto normal = [](const Raster<double>& r, int u, int v) {
    const double p = 0.5 * (r(u + 1, v) - r(u - 1, v));
    const double q = 0.5 * (r(u, v + 1) - r(u, v - 1));
    const double len = std::sqrt(p * p + q * q + 1.0);
    return Normal{-p / len, -q / len, 1.0 / len};
  };
  double sum = 0.0;
  std::size_t count = 0;
  for (int u = 1; u + 1 < z.height(); ++u)
    for (int v = 1; v + 1 < z.width(); ++v) {
      if (!region.inside(u, v) || !region.inside(u - 1, v) || !region.inside(u + 1, v) ||
          !region.inside(u, v - 1) || !region.inside(u, v + 1))
        continue;
      const Normal a = normal(z, u, v), b = normal(z_true, u, v);
      const double cx = a[1] * b[2] - a[2] * b[1];
      const double cy = a[2] * b[0] - a[0] * b[2];
      const double cz = a[0] * b[1] - a[1] * b[0];
      sum += std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz),
                        a[0] * b[0] + a[1] * b[1] + a[2] * b[2]);
      ++count;
    }
  if (count == 0) throw ConfigError("mae: no pixel with four inside neighbours");
  return sum / static_cast<double>(count) * 180.0 / std::numbers::pi;
}

}  // namespace normint
