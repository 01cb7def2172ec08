#include <cmath>
#include <random>

#include "doctest.h"
#include "normint/errors.hpp"
#include "normint/metrics.hpp"
#include "normint/nonconvex.hpp"
#include "normint/quadratic.hpp"
#include "normint/synthetic.hpp"
#include "oracle.hpp"

using namespace normint;

namespace {

const PhiFunction kPhi1{.kind = PhiKind::Log, .beta = 0.5};
const PhiFunction kPhi2{.kind = PhiKind::Rational, .gamma = 0.7};

double rel_err(const oracle::Vec& a, const oracle::Vec& b) {
  oracle::Vec d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return oracle::norm(d) / std::max(oracle::norm(b), 1e-300);
}

double cosine(const oracle::Vec& a, const oracle::Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s / (oracle::norm(a) * oracle::norm(b));
}

}  // namespace

TEST_CASE("phi closed forms") {
  CHECK(phi_eval(kPhi1, 0.0) == doctest::Approx(std::log(0.25)));
  CHECK(phi_deriv(kPhi1, 0.0) == 0.0);
  CHECK(phi_eval(kPhi2, 0.0) == 0.0);
  CHECK(phi_eval(kPhi2, 100 * kPhi2.gamma) > 0.9999);
  CHECK(phi_eval(PhiFunction{.kind = PhiKind::Quadratic}, 3.0) == 9.0);
}

TEST_CASE("phi derivatives match finite differences") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> s_dist(-3.0, 3.0);
  for (const PhiFunction& phi : {kPhi1, kPhi2}) {
    for (int k = 0; k < 20; ++k) {
      const double s = s_dist(rng), h = 1e-5;
      const double fd = (phi_eval(phi, s + h) - phi_eval(phi, s - h)) / (2 * h);
      CHECK(std::abs(phi_deriv(phi, s) - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
      CHECK(phi_weight(phi, s) * s == doctest::Approx(phi_deriv(phi, s)));
    }
  }
}

TEST_CASE("curvature bound dominates sampled second derivatives") {
  for (const PhiFunction& phi : {kPhi1, kPhi2}) {
    const double bound = phi_curvature_bound(phi);
    for (double s = 0.0; s < 5.0; s += 0.01) {
      const double h = 1e-4;
      const double d2 = (phi_eval(phi, s + h) - 2 * phi_eval(phi, s) + phi_eval(phi, s - h)) / (h * h);
      CHECK(d2 <= bound * (1 + 1e-4));
    }
  }
}

TEST_CASE("gradient of f matches finite differences on random masks") {
  std::mt19937_64 rng(77);
  int points = 0;
  for (int mask_trial = 0; mask_trial < 10; ++mask_trial) {
    const auto in = oracle::random_inside(6, 7, 0.8, rng);
    const Domain d(oracle::to_mask(in));
    const OperatorSet ops = build_operators(d);
    const TvOperators tv = build_tv_operators(d, ops);
    const std::size_t n = d.size();
    const GradientField g{oracle::random_vec(n, rng), oracle::random_vec(n, rng)};
    for (int k = 0; k < 5; ++k, ++points) {
      const auto z = oracle::random_vec(n, rng, -2, 2);
      for (const PhiFunction& phi : {kPhi1, kPhi2}) {
        const auto fd = oracle::fd_gradient([&](const oracle::Vec& x) { return f_eval(tv, g, phi, x); },
                                            z, 1e-6);
        CHECK(rel_err(grad_f(tv, g, phi, z), fd) < 1e-4);
      }
    }
  }
  CHECK(points == 50);
}

TEST_CASE("eight-pixel gradient check with phi1") {
  std::mt19937_64 rng(5);
  const Domain d(oracle::to_mask(oracle::eight_pixel()));
  const TvOperators tv = build_tv_operators(d, build_operators(d));
  const GradientField g{oracle::random_vec(8, rng), oracle::random_vec(8, rng)};
  const auto z = oracle::random_vec(8, rng);
  const auto fd =
      oracle::fd_gradient([&](const oracle::Vec& x) { return f_eval(tv, g, kPhi1, x); }, z, 1e-6);
  CHECK(rel_err(grad_f(tv, g, kPhi1, z), fd) < 1e-5);
}

TEST_CASE("perfect fit has zero gradient") {
  const SyntheticSurface s = generate_surface(SurfaceKind::Plane, 8, 8);
  const Domain d(DomainMask::full(8, 8));
  const TvOperators tv = build_tv_operators(d, build_operators(d));
  for (const PhiFunction& phi : {kPhi1, kPhi2})
    for (double x : grad_f(tv, gradient_on(d, s), phi, d.gather(s.z))) CHECK(std::abs(x) < 1e-12);
}

TEST_CASE("rational phi tends to the quadratic direction for large gamma") {
  std::mt19937_64 rng(9);
  const Domain d(DomainMask::full(6, 6));
  const TvOperators tv = build_tv_operators(d, build_operators(d));
  const GradientField g{oracle::random_vec(36, rng), oracle::random_vec(36, rng)};
  const auto z = oracle::random_vec(36, rng);
  const auto gq = grad_f(tv, g, PhiFunction{.kind = PhiKind::Quadratic}, z);
  const auto g2 = grad_f(tv, g, PhiFunction{.kind = PhiKind::Rational, .gamma = 1e3}, z);
  CHECK(cosine(g2, gq) > 0.999);
}

TEST_CASE("quadratic phi reproduces the least-squares fidelity") {
  // With residuals supported away from the border every quadrant keeps
  // all non-zero rows, so ¼ Σ_UV ‖∇^{UV} z − g‖² = ½ Σ_d ‖D_d z − g_d‖².
  std::mt19937_64 rng(10);
  const int h = 8, w = 9;
  const SyntheticSurface s = generate_surface(SurfaceKind::Plane, h, w);
  const Domain d(DomainMask::full(h, w));
  const OperatorSet ops = build_operators(d);
  const TvOperators tv = build_tv_operators(d, ops);
  const GradientField g = gradient_on(d, s);
  auto z = d.gather(s.z);
  for (int u = 2; u < h - 2; ++u)
    for (int v = 2; v < w - 2; ++v) z[d.index.index(u, v)] += oracle::random_vec(1, rng)[0];
  const PriorField none = PriorField::uniform(d.size(), 0.0);
  CHECK(f_eval(tv, g, PhiFunction{.kind = PhiKind::Quadratic}, z) ==
        doctest::Approx(quadratic_energy(ops, d, g, none, z)).epsilon(1e-8));
}

TEST_CASE("prox of the prior term") {
  std::mt19937_64 rng(12);
  const auto x = oracle::random_vec(10, rng);
  CHECK(prox_g(x, 0.3, PriorField::uniform(10, 0.0)) == x);
  const auto half = prox_g(x, 0.5, PriorField::uniform(10, 1.0));
  for (std::size_t i = 0; i < 10; ++i) CHECK(half[i] == doctest::Approx(x[i] / 2));

  PriorField prior{oracle::random_vec(10, rng), oracle::random_vec(10, rng, 0.0, 3.0)};
  const double a1 = 0.4;
  const auto p = prox_g(x, a1, prior);
  auto obj = [&](const oracle::Vec& y) {
    double e = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i)
      e += 0.5 * (y[i] - x[i]) * (y[i] - x[i]) +
           a1 * prior.lambda[i] * (y[i] - prior.z0[i]) * (y[i] - prior.z0[i]);
    return e;
  };
  const double e0 = obj(p);
  for (int k = 0; k < 100; ++k) {
    auto y = p;
    const auto dy = oracle::random_vec(10, rng, -1e-3, 1e-3);
    for (std::size_t i = 0; i < 10; ++i) y[i] += dy[i];
    CHECK(obj(y) >= e0);
  }
}

TEST_CASE("without inertia the energy decreases monotonically") {
  const SyntheticSurface s = generate_surface(SurfaceKind::TentLike, 24, 24);
  const Domain d(DomainMask::full(24, 24));
  const OperatorSet ops = build_operators(d);
  const GradientField g = add_gaussian_noise(gradient_on(d, s), {0.02, 1});
  const PriorField prior = PriorField::uniform(d.size(), 1e-6);
  for (const PhiFunction& phi : {kPhi1, kPhi2}) {
    const auto r = integrate_nonconvex(d, ops, g, prior, phi, IpianoConfig{.alpha2 = 0.0, .iterations = 200});
    for (std::size_t k = 1; k < r.energy.size(); ++k) CHECK(r.energy[k] <= r.energy[k - 1] + 1e-10);
  }
}

TEST_CASE("smooth noiseless data stays at the least-squares solution") {
  const SyntheticSurface s = generate_surface(SurfaceKind::SmoothBumps, 32, 32);
  const Domain d(DomainMask::full(32, 32));
  const OperatorSet ops = build_operators(d);
  const GradientField g = gradient_on(d, s);
  const PriorField prior = PriorField::uniform(d.size(), 1e-6);
  const auto truth = d.gather(s.z);
  const double e_ls = rmse_aligned(integrate_quadratic(d, ops, g, prior).z, truth);
  // The inertial default is not monotone step by step; only the end point is compared.
  const auto r = integrate_nonconvex(d, ops, g, prior, kPhi1, IpianoConfig{.iterations = 300});
  CHECK(r.energy.back() <= r.energy.front());
  CHECK(rmse_aligned(r.z, truth) <= e_ls + 1e-3);
}

TEST_CASE("invalid parameters") {
  const Domain d(DomainMask::full(4, 4));
  const OperatorSet ops = build_operators(d);
  const auto g = GradientField::zeros(16);
  const auto prior = PriorField::uniform(16, 1e-6);
  CHECK_THROWS_AS(integrate_nonconvex(d, ops, g, prior, PhiFunction{.kind = PhiKind::Log, .beta = 0.0}),
                  ConfigError);
  CHECK_THROWS_AS(integrate_nonconvex(d, ops, g, prior, kPhi1, IpianoConfig{.alpha2 = 1.0}), ConfigError);
}
