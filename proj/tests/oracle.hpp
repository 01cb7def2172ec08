#pragma once

// Dense reference implementations used to check the sparse code paths.
// Nothing here calls into the library's operator or solver code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "normint/domain.hpp"
#include "normint/raster.hpp"

namespace oracle {

using Vec = std::vector<double>;
using Mat = std::vector<std::vector<double>>;

inline Mat zeros(std::size_t r, std::size_t c) { return Mat(r, Vec(c, 0.0)); }

inline Mat eye(std::size_t n) {
  Mat m = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1.0;
  return m;
}

inline Mat transpose(const Mat& a) {
  if (a.empty()) return {};
  Mat t = zeros(a[0].size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

inline Mat matmul(const Mat& a, const Mat& b) {
  Mat c = zeros(a.size(), b.empty() ? 0 : b[0].size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < c[i].size(); ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline Vec matvec(const Mat& a, const Vec& x) {
  Vec y(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  return y;
}

inline Mat axpby(double alpha, const Mat& a, double beta, const Mat& b) {
  Mat c = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) c[i][j] = alpha * a[i][j] + beta * b[i][j];
  return c;
}

inline Mat scale_rows(const Mat& a, const Vec& w) {
  Mat c = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (double& x : c[i]) x *= w[i];
  return c;
}

inline double max_abs_diff(const Mat& a, const Mat& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) m = std::max(m, std::abs(a[i][j] - b[i][j]));
  return m;
}

inline double max_abs_diff(const Vec& a, const Vec& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double norm(const Vec& a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return std::sqrt(s);
}

inline double mean(const Vec& a) {
  double s = 0.0;
  for (double x : a) s += x;
  return a.empty() ? 0.0 : s / static_cast<double>(a.size());
}

inline Vec minus_mean(Vec a) {
  const double m = mean(a);
  for (double& x : a) x -= m;
  return a;
}

/// Gaussian elimination with partial pivoting.
inline Vec solve(Mat a, Vec b) {
  const std::size_t n = a.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
    if (a[piv][k] == 0.0) throw std::runtime_error("singular");
    std::swap(a[k], a[piv]);
    std::swap(b[k], b[piv]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  Vec x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return x;
}

/// Column-major enumeration of the inside pixels of a 0/1 grid.
struct Grid {
  int h = 0, w = 0;
  std::vector<std::vector<int>> idx;  // idx[u][v], -1 outside
  std::vector<std::pair<int, int>> px;

  explicit Grid(const std::vector<std::vector<int>>& inside)
      : h(static_cast<int>(inside.size())), w(static_cast<int>(inside[0].size())),
        idx(h, std::vector<int>(w, -1)) {
    for (int v = 0; v < w; ++v)
      for (int u = 0; u < h; ++u)
        if (inside[u][v]) {
          idx[u][v] = static_cast<int>(px.size());
          px.emplace_back(u, v);
        }
  }
  std::size_t n() const { return px.size(); }
  int at(int u, int v) const {
    return (u < 0 || v < 0 || u >= h || v >= w) ? -1 : idx[u][v];
  }
};

/// Forward/backward difference along u (du = ±1, dv = 0) or v. Row i is
/// +1 at the neighbour and −1 at i, flipped for backward differences, and
/// zero when the neighbour is outside.
inline Mat diff(const Grid& g, int du, int dv) {
  Mat d = zeros(g.n(), g.n());
  const double s = (du + dv) > 0 ? 1.0 : -1.0;
  for (std::size_t i = 0; i < g.n(); ++i) {
    const int j = g.at(g.px[i].first + du, g.px[i].second + dv);
    if (j < 0) continue;
    d[i][i] = -s;
    d[i][j] = s;
  }
  return d;
}

struct Diffs {
  Mat up, um, vp, vm;
  explicit Diffs(const Grid& g)
      : up(diff(g, 1, 0)), um(diff(g, -1, 0)), vp(diff(g, 0, 1)), vm(diff(g, 0, -1)) {}
};

inline Mat laplacian(const Diffs& d) {
  Mat l = zeros(d.up.size(), d.up.size());
  for (const Mat* m : {&d.up, &d.um, &d.vp, &d.vm}) l = axpby(1.0, l, 0.5, matmul(transpose(*m), *m));
  return l;
}

/// Central finite-difference gradient of a scalar function.
inline Vec fd_gradient(const std::function<double(const Vec&)>& f, Vec x, double h) {
  Vec g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double x0 = x[i];
    x[i] = x0 + h;
    const double fp = f(x);
    x[i] = x0 - h;
    const double fm = f(x);
    x[i] = x0;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

inline std::vector<std::vector<int>> full(int h, int w) {
  return std::vector<std::vector<int>>(h, std::vector<int>(w, 1));
}

inline normint::DomainMask to_mask(const std::vector<std::vector<int>>& inside) {
  const int h = static_cast<int>(inside.size()), w = static_cast<int>(inside[0].size());
  normint::DomainMask m(h, w);
  for (int u = 0; u < h; ++u)
    for (int v = 0; v < w; ++v) m.set(u, v, inside[u][v] != 0);
  return m;
}

/// Random mask with at least one inside pixel per row; density in (0, 1].
inline std::vector<std::vector<int>> random_inside(int h, int w, double density,
                                                   std::mt19937_64& rng) {
  std::bernoulli_distribution keep(density);
  auto in = std::vector<std::vector<int>>(h, std::vector<int>(w, 0));
  for (int u = 0; u < h; ++u)
    for (int v = 0; v < w; ++v) in[u][v] = keep(rng) ? 1 : 0;
  in[0][0] = 1;
  return in;
}

/// The 3×3 grid with its bottom-right pixel removed.
inline std::vector<std::vector<int>> eight_pixel() {
  auto in = full(3, 3);
  in[2][2] = 0;
  return in;
}

inline Vec random_vec(std::size_t n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  Vec x(n);
  for (double& v : x) v = d(rng);
  return x;
}

}  // namespace oracle
