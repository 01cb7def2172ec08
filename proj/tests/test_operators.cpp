#include <random>

#include "doctest.h"
#include "normint/errors.hpp"
#include "normint/operators.hpp"
#include "oracle.hpp"

using namespace normint;
using oracle::Mat;

namespace {

OperatorSet eight_pixel_ops() {
  return build_operators(Domain(oracle::to_mask(oracle::eight_pixel())));
}

Mat halves(const Mat& m) {
  Mat out = m;
  for (auto& row : out)
    for (double& x : row) x *= 0.5;
  return out;
}

}  // namespace

TEST_CASE("eight-pixel forward u difference") {
  const Mat expected{
      {-1, 1, 0, 0, 0, 0, 0, 0}, {0, -1, 1, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0, 0},
      {0, 0, 0, -1, 1, 0, 0, 0}, {0, 0, 0, 0, -1, 1, 0, 0}, {0, 0, 0, 0, 0, 0, 0, 0},
      {0, 0, 0, 0, 0, 0, -1, 1}, {0, 0, 0, 0, 0, 0, 0, 0}};
  CHECK(eight_pixel_ops()[Dir::UPlus].to_dense() == expected);
}

TEST_CASE("eight-pixel Laplacian") {
  const Mat expected{{2, -1, 0, -1, 0, 0, 0, 0},  {-1, 3, -1, 0, -1, 0, 0, 0},
                     {0, -1, 2, 0, 0, -1, 0, 0},  {-1, 0, 0, 3, -1, 0, -1, 0},
                     {0, -1, 0, -1, 4, -1, 0, -1}, {0, 0, -1, 0, -1, 2, 0, 0},
                     {0, 0, 0, -1, 0, 0, 2, -1},  {0, 0, 0, 0, -1, 0, -1, 2}};
  CHECK(eight_pixel_ops().laplacian.to_dense() == expected);
}

TEST_CASE("eight-pixel divergence pair") {
  const Mat du = halves({{-1, -1, 0, 0, 0, 0, 0, 0}, {1, 0, -1, 0, 0, 0, 0, 0},
                         {0, 1, 1, 0, 0, 0, 0, 0},   {0, 0, 0, -1, -1, 0, 0, 0},
                         {0, 0, 0, 1, 0, -1, 0, 0},  {0, 0, 0, 0, 1, 1, 0, 0},
                         {0, 0, 0, 0, 0, 0, -1, -1}, {0, 0, 0, 0, 0, 0, 1, 1}});
  // Last row: pixel (2,3) has only (2,2) to its left, so column 7 is empty.
  const Mat dv = halves({{-1, 0, 0, -1, 0, 0, 0, 0}, {0, -1, 0, 0, -1, 0, 0, 0},
                         {0, 0, -1, 0, 0, -1, 0, 0}, {1, 0, 0, 0, 0, 0, -1, 0},
                         {0, 1, 0, 0, 0, 0, 0, -1},  {0, 0, 1, 0, 0, 1, 0, 0},
                         {0, 0, 0, 1, 0, 0, 1, 0},   {0, 0, 0, 0, 1, 0, 0, 1}});
  const OperatorSet ops = eight_pixel_ops();
  CHECK(ops.d_u.to_dense() == du);
  CHECK(ops.d_v.to_dense() == dv);
}

TEST_CASE("1x2 grid v differences") {
  const OperatorSet ops = build_operators(Domain(DomainMask::full(1, 2)));
  CHECK(ops[Dir::VPlus].to_dense() == Mat{{-1, 1}, {0, 0}});
  CHECK(ops[Dir::VMinus].to_dense() == Mat{{0, 0}, {-1, 1}});
  CHECK(ops[Dir::UPlus].nnz() == 0);
  CHECK(ops[Dir::UMinus].nnz() == 0);
}

TEST_CASE("1D Laplacian-like Gram matrix is tridiagonal") {
  const OperatorSet ops = build_operators(Domain(DomainMask::full(7, 1)));
  const Mat g = oracle::matmul(oracle::transpose(ops[Dir::UPlus].to_dense()), ops[Dir::UPlus].to_dense());
  for (int i = 0; i < 7; ++i) {
    CHECK(g[i][i] == ((i == 0 || i == 6) ? 1.0 : 2.0));
    if (i + 1 < 7) CHECK(g[i][i + 1] == -1.0);
  }
  CHECK(ops.laplacian.to_dense() == g);
}

TEST_CASE("operators match an independent stencil oracle on random masks") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 15; ++trial) {
    const auto in = oracle::random_inside(6, 6, 0.7, rng);
    const oracle::Grid grid(in);
    const oracle::Diffs d(grid);
    const OperatorSet ops = build_operators(Domain(oracle::to_mask(in)));
    CHECK(ops[Dir::UPlus].to_dense() == d.up);
    CHECK(ops[Dir::UMinus].to_dense() == d.um);
    CHECK(ops[Dir::VPlus].to_dense() == d.vp);
    CHECK(ops[Dir::VMinus].to_dense() == d.vm);
    CHECK(oracle::max_abs_diff(ops.laplacian.to_dense(), oracle::laplacian(d)) == 0.0);
    const Mat du = oracle::axpby(0.5, oracle::transpose(d.up), 0.5, oracle::transpose(d.um));
    CHECK(ops.d_u.to_dense() == du);
    CHECK(ops.laplacian.is_symmetric());
  }
}

TEST_CASE("quadratic system against a dense normal-equations oracle") {
  std::mt19937_64 rng(5);
  const oracle::Grid grid(oracle::full(4, 4));
  const oracle::Diffs d(grid);
  const Domain domain(DomainMask::full(4, 4));
  const OperatorSet ops = build_operators(domain);
  const std::size_t n = domain.size();
  GradientField g{oracle::random_vec(n, rng), oracle::random_vec(n, rng)};
  PriorField prior{oracle::random_vec(n, rng), oracle::random_vec(n, rng, 0.0, 2.0)};
  const QuadraticSystem sys = build_quadratic_system(ops, g, prior);

  Mat a = oracle::laplacian(d);
  for (std::size_t i = 0; i < n; ++i) a[i][i] += prior.lambda[i];
  CHECK(oracle::max_abs_diff(sys.a.to_dense(), a) < 1e-14);

  // b = ½ Σ_d D_dᵀ g_d + λ z⁰ with g_u = p, g_v = q.
  oracle::Vec b(n, 0.0);
  for (const Mat* m : {&d.up, &d.um}) {
    const auto t = oracle::matvec(oracle::transpose(*m), g.p);
    for (std::size_t i = 0; i < n; ++i) b[i] += 0.5 * t[i];
  }
  for (const Mat* m : {&d.vp, &d.vm}) {
    const auto t = oracle::matvec(oracle::transpose(*m), g.q);
    for (std::size_t i = 0; i < n; ++i) b[i] += 0.5 * t[i];
  }
  for (std::size_t i = 0; i < n; ++i) b[i] += prior.lambda[i] * prior.z0[i];
  CHECK(oracle::max_abs_diff(sys.b, b) < 1e-14);
}

TEST_CASE("energy gradient is twice the normal-equation residual") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    const auto in = oracle::random_inside(5, 6, 0.75, rng);
    const Domain domain(oracle::to_mask(in));
    const OperatorSet ops = build_operators(domain);
    const std::size_t n = domain.size();
    GradientField g{oracle::random_vec(n, rng), oracle::random_vec(n, rng)};
    PriorField prior{oracle::random_vec(n, rng), oracle::random_vec(n, rng, 0.0, 1.0)};
    const QuadraticSystem sys = build_quadratic_system(ops, g, prior);
    const auto z = oracle::random_vec(n, rng);
    const auto fd = oracle::fd_gradient(
        [&](const oracle::Vec& x) { return quadratic_energy(ops, domain, g, prior, x); }, z, 1e-5);
    auto r = sys.a * z;
    for (std::size_t i = 0; i < n; ++i) r[i] = 2.0 * (r[i] - sys.b[i]);
    CHECK(oracle::max_abs_diff(r, fd) < 1e-7);
  }
}

TEST_CASE("constants span the null space when lambda is zero") {
  const Domain domain(oracle::to_mask(oracle::eight_pixel()));
  const OperatorSet ops = build_operators(domain);
  const auto az = ops.laplacian * std::vector<double>(8, 3.5);
  for (double x : az) CHECK(x == 0.0);
}

TEST_CASE("fifth row reproduces the interior five-point stencil") {
  const Domain domain(oracle::to_mask(oracle::eight_pixel()));
  const OperatorSet ops = build_operators(domain);
  std::mt19937_64 rng(1);
  const auto z = oracle::random_vec(8, rng);
  const auto lz = ops.laplacian * z;
  // (2,2) is index 4; its neighbours are 1, 3, 5, 7.
  CHECK(lz[4] == doctest::Approx(4 * z[4] - z[1] - z[3] - z[5] - z[7]));
}

TEST_CASE("A is positive definite with a positive lambda") {
  const Domain domain(oracle::to_mask(oracle::eight_pixel()));
  const OperatorSet ops = build_operators(domain);
  PriorField prior = PriorField::uniform(8, 0.0);
  prior.lambda[0] = 1e-3;
  const auto sys = build_quadratic_system(ops, GradientField::zeros(8), prior);
  // Cholesky on the dense matrix succeeds iff it is positive definite.
  Mat a = sys.a.to_dense();
  bool pd = true;
  for (std::size_t k = 0; k < 8 && pd; ++k) {
    for (std::size_t j = 0; j < k; ++j) a[k][k] -= a[k][j] * a[k][j];
    if (a[k][k] <= 0.0) {
      pd = false;
      break;
    }
    a[k][k] = std::sqrt(a[k][k]);
    for (std::size_t i = k + 1; i < 8; ++i) {
      for (std::size_t j = 0; j < k; ++j) a[i][k] -= a[i][j] * a[k][j];
      a[i][k] /= a[k][k];
    }
  }
  CHECK(pd);
}

TEST_CASE("invalid inputs") {
  const Domain domain(DomainMask::full(3, 3));
  const OperatorSet ops = build_operators(domain);
  CHECK_THROWS_AS(build_quadratic_system(ops, GradientField::zeros(4), PriorField::uniform(9, 1.0)),
                  ConfigError);
  CHECK_THROWS_AS(build_quadratic_system(ops, GradientField::zeros(9), PriorField::uniform(9, -1.0)),
                  ConfigError);
  DomainMask m(3, 3);
  m.set(0, 0, true);
  m.set(2, 2, true);
  m.set(2, 1, true);
  const Domain holes(m);
  CHECK_THROWS_AS(check_isolated(holes, PriorField::uniform(3, 0.0)), ConfigError);
  CHECK_NOTHROW(check_isolated(holes, PriorField::uniform(3, 1e-6)));
}

TEST_CASE("empty sub-domains give zero matrices") {
  const OperatorSet ops = build_operators(Domain(DomainMask::full(1, 1)));
  for (Dir d : kAllDirs) CHECK(ops[d].to_dense() == Mat{{0}});
  CHECK(ops.laplacian.to_dense() == Mat{{0}});
}
