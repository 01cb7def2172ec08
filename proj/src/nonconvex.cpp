#include "normint/nonconvex.hpp"

#include <cmath>

#include "normint/errors.hpp"
#include "normint/kernels.hpp"
#include "normint/quadratic.hpp"

namespace normint {

void PhiFunction::validate() const {
  if (kind == PhiKind::Log && !(beta > 0.0)) throw ConfigError("beta must be positive");
  if (kind == PhiKind::Rational && !(gamma > 0.0)) throw ConfigError("gamma must be positive");
}

double phi_eval(const PhiFunction& phi, double s) {
  const double s2 = s * s;
  switch (phi.kind) {
    case PhiKind::Log: return std::log(s2 + phi.beta * phi.beta);
    case PhiKind::Rational: return s2 / (s2 + phi.gamma * phi.gamma);
    case PhiKind::Quadratic: return s2;
  }
  return 0.0;
}

double phi_deriv(const PhiFunction& phi, double s) { return s * phi_weight(phi, s); }

double phi_weight(const PhiFunction& phi, double s) {
  const double s2 = s * s;
  switch (phi.kind) {
    case PhiKind::Log: return 2.0 / (s2 + phi.beta * phi.beta);
    case PhiKind::Rational: {
      const double d = s2 + phi.gamma * phi.gamma;
      return 2.0 * phi.gamma * phi.gamma / (d * d);
    }
    case PhiKind::Quadratic: return 2.0;
  }
  return 0.0;
}

double phi_curvature_bound(const PhiFunction& phi) {
  switch (phi.kind) {
    case PhiKind::Log: return 2.0 / (phi.beta * phi.beta);
    case PhiKind::Rational: return 2.0 / (phi.gamma * phi.gamma);
    case PhiKind::Quadratic: return 2.0;
  }
  return 2.0;
}

double f_eval(const TvOperators& tv, const GradientField& g, const PhiFunction& phi,
              const DepthMap& z) {
  double f = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    const std::vector<double> gu = tv.du[k] * z;
    const std::vector<double> gv = tv.dv[k] * z;
    for (std::int32_t i : tv.members[k])
      f += 0.25 * phi_eval(phi, std::hypot(gu[i] - g.p[i], gv[i] - g.q[i]));
  }
  return f;
}

std::vector<double> grad_f(const TvOperators& tv, const GradientField& g,
                           const PhiFunction& phi, const DepthMap& z) {
  const std::size_t n = z.size();
  std::vector<double> grad(n, 0.0);
  std::vector<double> wu(n), wv(n);
  for (std::size_t k = 0; k < 4; ++k) {
    const std::vector<double> gu = tv.du[k] * z;
    const std::vector<double> gv = tv.dv[k] * z;
    std::fill(wu.begin(), wu.end(), 0.0);
    std::fill(wv.begin(), wv.end(), 0.0);
    for (std::int32_t i : tv.members[k]) {
      const double ru = gu[i] - g.p[i];
      const double rv = gv[i] - g.q[i];
      const double w = 0.25 * phi_weight(phi, std::hypot(ru, rv));
      wu[i] = w * ru;
      wv[i] = w * rv;
    }
    const std::vector<double> tu = tv.du[k].multiply_transposed(wu);
    const std::vector<double> tvv = tv.dv[k].multiply_transposed(wv);
    for (std::size_t i = 0; i < n; ++i) grad[i] += tu[i] + tvv[i];
  }
  return grad;
}

double prior_energy(const PriorField& prior, const DepthMap& z) {
  double e = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double r = z[i] - prior.z0[i];
    e += prior.lambda[i] * r * r;
  }
  return e;
}

std::vector<double> prox_g(const std::vector<double>& x_hat, double alpha1,
                           const PriorField& prior) {
  std::vector<double> x(x_hat.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double c = 2.0 * alpha1 * prior.lambda[i];
    x[i] = (x_hat[i] + c * prior.z0[i]) / (1.0 + c);
  }
  return x;
}

NonconvexResult integrate_nonconvex(const Domain& domain, const OperatorSet& ops,
                                    const GradientField& g, const PriorField& prior,
                                    const PhiFunction& phi, const IpianoConfig& cfg,
                                    const DepthMap& z_init) {
  validate_inputs(ops, g, prior);
  check_isolated(domain, prior);
  phi.validate();
  if (!(cfg.alpha2 >= 0.0 && cfg.alpha2 < 1.0)) throw ConfigError("alpha2 must lie in [0, 1)");
  if (cfg.iterations < 0) throw ConfigError("iteration budget must be non-negative");

  const TvOperators tv = build_tv_operators(domain, ops);
  DepthMap z = z_init;
  if (z.empty()) z = integrate_quadratic(domain, ops, g, prior).z;
  if (z.size() != domain.size()) throw ConfigError("initial depth size does not match domain");

  // Each row pair of ∇^{UV} has squared norm at most 8 in total over the
  // four quadrants, hence ‖∇²f‖ ≤ ¼ · 4 · 8 · sup Φ''.
  const double lip0 = 8.0 * phi_curvature_bound(phi);
  double alpha1 = cfg.alpha1 > 0.0 ? cfg.alpha1 : 1.98 * (1.0 - cfg.alpha2) / lip0;

  NonconvexResult res;
  DepthMap z_prev = z;
  double fz = f_eval(tv, g, phi, z);
  res.energy.push_back(fz + prior_energy(prior, z));
  const std::size_t n = z.size();
  std::vector<double> x_hat(n), step(n);
  int accepted = 0;

  for (int it = 1; it <= cfg.iterations; ++it) {
    const std::vector<double> grad = grad_f(tv, g, phi, z);
    if (accepted > 0 && accepted % cfg.grow_every == 0) alpha1 *= 2.0;
    DepthMap z_new;
    double f_new = 0.0;
    int halvings = 0;
    for (;;) {
      for (std::size_t i = 0; i < n; ++i)
        x_hat[i] = z[i] - alpha1 * grad[i] + cfg.alpha2 * (z[i] - z_prev[i]);
      z_new = prox_g(x_hat, alpha1, prior);
      for (std::size_t i = 0; i < n; ++i) step[i] = z_new[i] - z[i];
      f_new = f_eval(tv, g, phi, z_new);
      const double lip = 1.98 * (1.0 - cfg.alpha2) / alpha1;
      const double bound =
          fz + kernels::dot(grad, step) + 0.5 * lip * kernels::dot(step, step);
      if (f_new <= bound + 1e-12 * std::abs(fz)) break;
      if (++halvings > cfg.max_halvings) {
        fix_free_components(domain, prior, z);
        throw SolverError("step size backtracking failed", std::move(z), alpha1, it);
      }
      alpha1 *= 0.5;
    }
    ++accepted;
    z_prev = std::move(z);
    z = std::move(z_new);
    fz = f_new;
    res.energy.push_back(fz + prior_energy(prior, z));
    res.iterations = it;
  }
  fix_free_components(domain, prior, z);
  res.z = std::move(z);
  res.alpha1 = alpha1;
  return res;
}

}  // namespace normint
