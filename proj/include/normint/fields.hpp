#pragma once

// Per-pixel data over the domain, stored as vectors in linear-index order.

#include <vector>

namespace normint {

/// Observed gradient: p along u (rows), q along v (columns).
struct GradientField {
  std::vector<double> p;
  std::vector<double> q;

  std::size_t size() const noexcept { return p.size(); }
  static GradientField zeros(std::size_t n) { return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)}; }
};

using DepthMap = std::vector<double>;

/// Prior depth and its per-pixel weight (λ, not λ²).
struct PriorField {
  std::vector<double> z0;
  std::vector<double> lambda;

  std::size_t size() const noexcept { return z0.size(); }
  static PriorField uniform(std::size_t n, double lambda, double z0 = 0.0) {
    return {std::vector<double>(n, z0), std::vector<double>(n, lambda)};
  }
};

}  // namespace normint
