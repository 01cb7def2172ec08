#include "normint/anisotropic.hpp"

#include <cmath>
#include <iostream>
#include <string>

#include "normint/errors.hpp"
#include "normint/kernels.hpp"
#include "normint/quadratic.hpp"

namespace normint {

DiffusionVariant parse_diffusion_variant(std::string_view name) {
  if (name == "pm" || name == "perona_malik") return DiffusionVariant::PeronaMalik;
  if (name == "stat" || name == "statistical") return DiffusionVariant::Statistical;
  if (name == "scaled") return DiffusionVariant::Scaled;
  throw ConfigError("unknown diffusion variant '" + std::string(name) + "'");
}

DiffusionWeights DiffusionWeights::ones(std::size_t n) {
  DiffusionWeights w;
  for (std::size_t k = 0; k < 4; ++k) {
    w.a[k].assign(n, 1.0);
    w.b[k].assign(n, 1.0);
  }
  return w;
}

double diffusion_weight(double data, double du, double dv, const DiffusionConfig& cfg) {
  double mu = cfg.mu, nu = cfg.nu;
  if (cfg.variant == DiffusionVariant::Statistical) mu = nu = 1.0;
  const double grad = 1.0 / std::sqrt((du * du + dv * dv) / (mu * mu) + 1.0);
  if (cfg.variant == DiffusionVariant::PeronaMalik) return grad;
  const double t = data / nu;
  return grad / std::sqrt(1.0 + t * t);
}

DiffusionWeights compute_weights(const Domain& domain, const OperatorSet& ops,
                                 const DepthMap& z, const GradientField& g,
                                 const DiffusionConfig& cfg) {
  if (!(cfg.mu > 0.0) || !(cfg.nu > 0.0)) throw ConfigError("mu and nu must be positive");
  const std::size_t n = domain.size();
  std::array<std::vector<double>, 4> dz;
  for (Dir d : kAllDirs) dz[dir_index(d)] = ops[d] * z;  // zero off the sub-domain
  DiffusionWeights w;
  for (std::size_t k = 0; k < 4; ++k) {
    const Quadrant q = kQuadrants[k];
    const auto& du = dz[dir_index(u_dir(q.u))];
    const auto& dv = dz[dir_index(v_dir(q.v))];
    w.a[k].resize(n);
    w.b[k].resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      w.a[k][i] = diffusion_weight(g.p[i], du[i], dv[i], cfg);
      w.b[k][i] = diffusion_weight(g.q[i], du[i], dv[i], cfg);
    }
  }
  return w;
}

double surrogate_energy(const Domain& domain, const OperatorSet& ops, const GradientField& g,
                        const PriorField& prior, const DiffusionWeights& w, const DepthMap& z) {
  std::array<std::vector<double>, 4> dz;
  for (Dir d : kAllDirs) dz[dir_index(d)] = ops[d] * z;
  double e = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    const Quadrant q = kQuadrants[k];
    const Dir du = u_dir(q.u), dv = v_dir(q.v);
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (domain.sub.contains(du, i)) {
        const double r = w.a[k][i] * (dz[dir_index(du)][i] - g.p[i]);
        e += 0.25 * r * r;
      }
      if (domain.sub.contains(dv, i)) {
        const double r = w.b[k][i] * (dz[dir_index(dv)][i] - g.q[i]);
        e += 0.25 * r * r;
      }
    }
  }
  return e + [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double r = z[i] - prior.z0[i];
      s += prior.lambda[i] * r * r;
    }
    return s;
  }();
}

QuadraticSystem build_weighted_system(const Domain& domain, const OperatorSet& ops,
                                      const GradientField& g, const PriorField& prior,
                                      const DiffusionWeights& w) {
  (void)domain;
  const std::size_t n = ops.size();
  std::vector<Triplet> t;
  std::vector<double> rhs(n, 0.0), sq(n), data(n);
  for (std::size_t k = 0; k < 4; ++k) {
    const Quadrant q = kQuadrants[k];
    for (int part = 0; part < 2; ++part) {
      const SparseMatrix& d = part == 0 ? ops[u_dir(q.u)] : ops[v_dir(q.v)];
      const auto& wt = part == 0 ? w.a[k] : w.b[k];
      const auto& obs = part == 0 ? g.p : g.q;
      for (std::size_t i = 0; i < n; ++i) {
        sq[i] = 0.25 * wt[i] * wt[i];
        data[i] = sq[i] * obs[i];
      }
      for (const Triplet& e : weighted_gram(d, sq).triplets()) t.push_back(e);
      const std::vector<double> r = d.multiply_transposed(data);
      for (std::size_t i = 0; i < n; ++i) rhs[i] += r[i];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    t.push_back({static_cast<std::int32_t>(i), static_cast<std::int32_t>(i), prior.lambda[i]});
    rhs[i] += prior.lambda[i] * prior.z0[i];
  }
  return {SparseMatrix::from_triplets(n, n, std::move(t)), std::move(rhs)};
}

DepthMap weighted_ls_step(const Domain& domain, const OperatorSet& ops, const DepthMap& z_k,
                          const GradientField& g, const PriorField& prior,
                          const DiffusionWeights& w, const DiffusionConfig& cfg,
                          bool* used_fallback) {
  const QuadraticSystem sys = build_weighted_system(domain, ops, g, prior, w);
  if (used_fallback != nullptr) *used_fallback = false;
  try {
    return direct_solve_spd(sys.a, sys.b);
  } catch (const SolverError& e) {
    std::cerr << "warning: " << e.what() << "; falling back to conjugate gradient\n";
    if (used_fallback != nullptr) *used_fallback = true;
    DepthMap z = pcg_solve(sys.a, sys.b, z_k, cfg.fallback).x;
    fix_free_components(domain, prior, z);
    return z;
  }
}

AnisotropicResult integrate_anisotropic(const Domain& domain, const OperatorSet& ops,
                                        const GradientField& g, const PriorField& prior,
                                        const DiffusionConfig& cfg, const DepthMap& z_init) {
  validate_inputs(ops, g, prior);
  check_isolated(domain, prior);
  if (!(cfg.mu > 0.0) || !(cfg.nu > 0.0)) throw ConfigError("mu and nu must be positive");
  if (cfg.iterations < 0) throw ConfigError("iteration budget must be non-negative");

  AnisotropicResult res;
  DepthMap z = z_init;
  if (z.empty()) z = integrate_quadratic(domain, ops, g, prior).z;
  if (z.size() != domain.size()) throw ConfigError("initial depth size does not match domain");
  res.weights = DiffusionWeights::ones(domain.size());

  for (int it = 1; it <= cfg.iterations; ++it) {
    res.weights = compute_weights(domain, ops, z, g, cfg);
    res.surrogate_before.push_back(surrogate_energy(domain, ops, g, prior, res.weights, z));
    bool fell_back = false;
    DepthMap z_new = weighted_ls_step(domain, ops, z, g, prior, res.weights, cfg, &fell_back);
    res.fallbacks += fell_back ? 1 : 0;
    res.surrogate_after.push_back(surrogate_energy(domain, ops, g, prior, res.weights, z_new));
    double num = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) num += (z_new[i] - z[i]) * (z_new[i] - z[i]);
    const double den = kernels::dot(z, z);
    z = std::move(z_new);
    res.iterations = it;
    if (std::sqrt(num) <= cfg.change_tol * std::max(std::sqrt(den), 1.0)) break;
  }
  res.z = std::move(z);
  return res;
}

}  // namespace normint
