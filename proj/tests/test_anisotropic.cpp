#include <cmath>
#include <random>

#include "doctest.h"
#include "normint/anisotropic.hpp"
#include "normint/errors.hpp"
#include "normint/metrics.hpp"
#include "normint/quadratic.hpp"
#include "normint/synthetic.hpp"
#include "oracle.hpp"

using namespace normint;

namespace {

DiffusionWeights random_weights(std::size_t n, std::mt19937_64& rng) {
  DiffusionWeights w;
  for (std::size_t k = 0; k < 4; ++k) {
    w.a[k] = oracle::random_vec(n, rng, 0.05, 1.0);
    w.b[k] = oracle::random_vec(n, rng, 0.05, 1.0);
  }
  return w;
}

}  // namespace

TEST_CASE("weight formula") {
  DiffusionConfig cfg{.mu = 0.3, .nu = 10.0};
  CHECK(diffusion_weight(0.0, 0.0, 0.0, cfg) == 1.0);
  cfg.variant = DiffusionVariant::PeronaMalik;
  CHECK(diffusion_weight(5.0, std::sqrt(3.0) * 0.3, 0.0, cfg) == doctest::Approx(0.5));
  CHECK(diffusion_weight(5.0, 0.3, std::sqrt(2.0) * 0.3, cfg) == doctest::Approx(0.5));

  std::mt19937_64 rng(3);
  for (int k = 0; k < 50; ++k) {
    const auto x = oracle::random_vec(3, rng, -4, 4);
    const double stat = diffusion_weight(x[0], x[1], x[2], DiffusionConfig{.mu = 7, .nu = 9, .variant = DiffusionVariant::Statistical});
    const double scaled = diffusion_weight(x[0], x[1], x[2], DiffusionConfig{.mu = 1, .nu = 1});
    CHECK(std::abs(stat - scaled) < 1e-12);
    const double closed = 1.0 / (std::sqrt(1 + x[0] * x[0]) * std::sqrt(x[1] * x[1] + x[2] * x[2] + 1));
    CHECK(std::abs(stat - closed) < 1e-12);
  }
}

TEST_CASE("weights are in (0, 1] and shrink with the depth gradient") {
  std::mt19937_64 rng(4);
  const DiffusionConfig cfg{.mu = 0.5, .nu = 2.0};
  for (int k = 0; k < 200; ++k) {
    const auto x = oracle::random_vec(3, rng, -3, 3);
    const double w = diffusion_weight(x[0], x[1], x[2], cfg);
    CHECK(w > 0.0);
    CHECK(w <= 1.0);
    const double grown = diffusion_weight(x[0], 1.5 * x[1], x[2], cfg);
    CHECK(grown <= w);
  }
}

TEST_CASE("flat depth and zero data give unit weights") {
  const Domain d(DomainMask::full(5, 5));
  const OperatorSet ops = build_operators(d);
  const auto w = compute_weights(d, ops, std::vector<double>(25, 2.0), GradientField::zeros(25),
                                 DiffusionConfig{});
  for (std::size_t k = 0; k < 4; ++k)
    for (std::size_t i = 0; i < 25; ++i) {
      CHECK(w.a[k][i] == 1.0);
      CHECK(w.b[k][i] == 1.0);
    }
}

TEST_CASE("weighted normal equations against a dense oracle") {
  std::mt19937_64 rng(8);
  const oracle::Grid grid(oracle::full(4, 4));
  const oracle::Diffs dd(grid);
  const Domain d(DomainMask::full(4, 4));
  const OperatorSet ops = build_operators(d);
  const std::size_t n = d.size();
  const GradientField g{oracle::random_vec(n, rng), oracle::random_vec(n, rng)};
  const PriorField prior{oracle::random_vec(n, rng), std::vector<double>(n, 0.1)};
  const DiffusionWeights w = random_weights(n, rng);

  const std::array<const oracle::Mat*, 4> du{&dd.up, &dd.up, &dd.um, &dd.um};
  const std::array<const oracle::Mat*, 4> dv{&dd.vp, &dd.vm, &dd.vp, &dd.vm};
  oracle::Mat a = oracle::zeros(n, n);
  oracle::Vec b(n, 0.0);
  for (std::size_t k = 0; k < 4; ++k) {
    for (int part = 0; part < 2; ++part) {
      const oracle::Mat& m = part == 0 ? *du[k] : *dv[k];
      oracle::Vec sq(n);
      for (std::size_t i = 0; i < n; ++i) sq[i] = 0.25 * std::pow(part == 0 ? w.a[k][i] : w.b[k][i], 2);
      const auto wm = oracle::scale_rows(m, sq);
      a = oracle::axpby(1.0, a, 1.0, oracle::matmul(oracle::transpose(m), wm));
      const auto t = oracle::matvec(oracle::transpose(wm), part == 0 ? g.p : g.q);
      for (std::size_t i = 0; i < n; ++i) b[i] += t[i];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    a[i][i] += prior.lambda[i];
    b[i] += prior.lambda[i] * prior.z0[i];
  }
  const auto sys = build_weighted_system(d, ops, g, prior, w);
  CHECK(oracle::max_abs_diff(sys.a.to_dense(), a) < 1e-14);
  CHECK(oracle::max_abs_diff(sys.b, b) < 1e-14);
  const auto z = weighted_ls_step(d, ops, {}, g, prior, w, DiffusionConfig{});
  CHECK(oracle::max_abs_diff(z, oracle::solve(a, b)) < 1e-8);

  // The step is the exact minimizer of the frozen-weight energy.
  const double e0 = surrogate_energy(d, ops, g, prior, w, z);
  for (int k = 0; k < 20; ++k) {
    auto zp = z;
    const auto dz = oracle::random_vec(n, rng, -1e-4, 1e-4);
    for (std::size_t i = 0; i < n; ++i) zp[i] += dz[i];
    CHECK(surrogate_energy(d, ops, g, prior, w, zp) >= e0);
  }
}

TEST_CASE("unit weights reproduce the quadratic integrator") {
  const SyntheticSurface s = generate_surface(SurfaceKind::VaseLike, 32, 32);
  const Domain d(DomainMask::full(32, 32));
  const OperatorSet ops = build_operators(d);
  const GradientField g = add_gaussian_noise(gradient_on(d, s), {0.01, 0});
  const PriorField prior = PriorField::uniform(d.size(), 1e-6);
  const auto zq = integrate_quadratic(d, ops, g, prior, SolverConfig{.rel_tolerance = 1e-12}).z;
  const auto za = weighted_ls_step(d, ops, {}, g, prior, DiffusionWeights::ones(d.size()), DiffusionConfig{});
  CHECK(oracle::max_abs_diff(oracle::minus_mean(za), oracle::minus_mean(zq)) < 1e-6);
}

TEST_CASE("zero weights on a band defer to the prior there") {
  const Domain d(DomainMask::full(6, 6));
  const OperatorSet ops = build_operators(d);
  std::mt19937_64 rng(2);
  const GradientField g{oracle::random_vec(36, rng), oracle::random_vec(36, rng)};
  PriorField prior{oracle::random_vec(36, rng), std::vector<double>(36, 1.0)};
  DiffusionWeights w = DiffusionWeights::ones(36);
  // Pixels of column 0 couple to column 1 only through v-terms.
  for (std::size_t k = 0; k < 4; ++k)
    for (std::size_t i = 0; i < 36; ++i) {
      const Pixel px = d.index.pixel(i);
      if (px.v <= 1) w.b[k][i] = 0.0;
      if (px.v == 0) w.a[k][i] = 0.0;
    }
  const auto z = weighted_ls_step(d, ops, {}, g, prior, w, DiffusionConfig{});
  for (std::size_t i = 0; i < 36; ++i)
    if (d.index.pixel(i).v == 0) CHECK(z[i] == doctest::Approx(prior.z0[i]).epsilon(1e-10));
}

TEST_CASE("fixed point never increases the frozen-weight energy") {
  const SyntheticSurface s = generate_surface(SurfaceKind::VaseLike, 32, 32);
  const Domain d(DomainMask::full(32, 32));
  const OperatorSet ops = build_operators(d);
  const GradientField g = add_gaussian_noise(gradient_on(d, s), {0.01, 0});
  const auto r = integrate_anisotropic(d, ops, g, PriorField::uniform(d.size(), 1e-6),
                                       DiffusionConfig{.mu = 0.05, .iterations = 20});
  REQUIRE(r.surrogate_before.size() == r.surrogate_after.size());
  CHECK(!r.surrogate_after.empty());
  for (std::size_t k = 0; k < r.surrogate_after.size(); ++k)
    CHECK(r.surrogate_after[k] <= r.surrogate_before[k] + 1e-8);
  CHECK(r.fallbacks == 0);
}

TEST_CASE("smooth noiseless surface matches least squares") {
  const SyntheticSurface s = generate_surface(SurfaceKind::SmoothBumps, 32, 32);
  const Domain d(DomainMask::full(32, 32));
  const OperatorSet ops = build_operators(d);
  const GradientField g = gradient_on(d, s);
  const PriorField prior = PriorField::uniform(d.size(), 1e-6);
  const auto truth = d.gather(s.z);
  const auto zq = integrate_quadratic(d, ops, g, prior, SolverConfig{.rel_tolerance = 1e-10}).z;
  const auto za = integrate_anisotropic(d, ops, g, prior, DiffusionConfig{.mu = 2.0}).z;
  CHECK(std::abs(rmse_aligned(za, truth) - rmse_aligned(zq, truth)) < 1e-3);
}

TEST_CASE("zero data gives a constant") {
  const Domain d(DomainMask::full(6, 7));
  const OperatorSet ops = build_operators(d);
  const auto z = integrate_anisotropic(d, ops, GradientField::zeros(42), PriorField::uniform(42, 1e-6)).z;
  for (double x : z) CHECK(std::abs(x - z[0]) < 1e-12);
}

TEST_CASE("invalid parameters") {
  const Domain d(DomainMask::full(4, 4));
  const OperatorSet ops = build_operators(d);
  CHECK_THROWS_AS(integrate_anisotropic(d, ops, GradientField::zeros(16), PriorField::uniform(16, 1e-6),
                                        DiffusionConfig{.mu = 0.0}),
                  ConfigError);
  CHECK_THROWS_AS(parse_diffusion_variant("heat"), ConfigError);
}
