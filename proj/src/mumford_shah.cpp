#include "normint/mumford_shah.hpp"

#include <algorithm>

#include "normint/errors.hpp"
#include "normint/quadratic.hpp"

namespace normint {
namespace {

void check_config(const MsConfig& cfg) {
  if (!(cfg.mu > 0.0)) throw ConfigError("mu must be positive");
  if (!(cfg.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (cfg.iterations < 0) throw ConfigError("iteration budget must be non-negative");
}

// D_d z − data on the sub-domain of d, zero elsewhere.
std::vector<double> residual(const Domain& domain, const OperatorSet& ops, Dir d,
                             const DepthMap& z, const GradientField& g) {
  std::vector<double> r = ops[d] * z;
  const std::vector<double>& data = data_for(g, d);
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = domain.sub.contains(d, i) ? r[i] - data[i] : 0.0;
  return r;
}

// CG that keeps the best iterate when the inner budget runs out. Every CG
// iterate started from x0 has energy ≤ that of x0, so this never increases
// the block objective.
std::vector<double> solve_keep(const SparseMatrix& a, const std::vector<double>& b,
                               const std::vector<double>& x0, const SolverConfig& cfg,
                               int* unconverged) {
  try {
    return pcg_solve(a, b, x0, cfg).x;
  } catch (const SolverError& e) {
    if (unconverged != nullptr) ++*unconverged;
    return e.best_iterate().empty() ? x0 : e.best_iterate();
  }
}

thread_local int* g_unconverged = nullptr;  // set for the duration of one integration

}  // namespace

IndicatorFields IndicatorFields::ones(std::size_t n) {
  IndicatorFields f;
  for (auto& w : f.w) w.assign(n, 1.0);
  return f;
}

std::vector<double> IndicatorFields::edge_map() const {
  std::vector<double> m = w[0];
  for (std::size_t k = 1; k < 4; ++k)
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::min(m[i], w[k][i]);
  return m;
}

double at_energy(const Domain& domain, const OperatorSet& ops, const DepthMap& z,
                 const IndicatorFields& w, const GradientField& g, const PriorField& prior,
                 const MsConfig& cfg) {
  double fid = 0.0, smooth = 0.0, well = 0.0, pri = 0.0;
  for (Dir d : kAllDirs) {
    const auto& wd = w.w[dir_index(d)];
    const std::vector<double> r = residual(domain, ops, d, z, g);
    const std::vector<double> dw = ops[d] * wd;
    for (std::size_t i = 0; i < z.size(); ++i) {
      fid += wd[i] * wd[i] * r[i] * r[i];
      smooth += dw[i] * dw[i];
      well += (wd[i] - 1.0) * (wd[i] - 1.0);
    }
  }
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double r = z[i] - prior.z0[i];
    pri += prior.lambda[i] * r * r;
  }
  return 0.5 * cfg.mu * fid + 0.5 * cfg.epsilon * smooth + well / (8.0 * cfg.epsilon) + pri;
}

DepthMap ms_z_update(const Domain& domain, const OperatorSet& ops, const DepthMap& z_k,
                     const IndicatorFields& w, const GradientField& g,
                     const PriorField& prior, const MsConfig& cfg) {
  (void)domain;
  const std::size_t n = z_k.size();
  std::vector<Triplet> t;
  std::vector<double> rhs(n, 0.0), sq(n), data(n);
  for (Dir d : kAllDirs) {
    const auto& wd = w.w[dir_index(d)];
    const auto& obs = data_for(g, d);
    for (std::size_t i = 0; i < n; ++i) {
      sq[i] = cfg.mu * wd[i] * wd[i];
      data[i] = sq[i] * obs[i];
    }
    for (const Triplet& e : weighted_gram(ops[d], sq).triplets()) t.push_back(e);
    const std::vector<double> r = ops[d].multiply_transposed(data);
    for (std::size_t i = 0; i < n; ++i) rhs[i] += r[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    t.push_back({static_cast<std::int32_t>(i), static_cast<std::int32_t>(i),
                 2.0 * prior.lambda[i]});
    rhs[i] += 2.0 * prior.lambda[i] * prior.z0[i];
  }
  const SparseMatrix a = SparseMatrix::from_triplets(n, n, std::move(t));
  return solve_keep(a, rhs, z_k, cfg.solver, g_unconverged);
}

std::vector<double> ms_w_update(const Domain& domain, const OperatorSet& ops, Dir d,
                                const DepthMap& z, const std::vector<double>& w_k,
                                const GradientField& g, const MsConfig& cfg) {
  const std::size_t n = z.size();
  const std::vector<double> r = residual(domain, ops, d, z, g);
  const double well = 1.0 / (4.0 * cfg.epsilon);
  std::vector<Triplet> t;
  for (Triplet e : weighted_gram(ops[d]).triplets()) {
    e.value *= cfg.epsilon;
    t.push_back(e);
  }
  for (std::size_t i = 0; i < n; ++i)
    t.push_back({static_cast<std::int32_t>(i), static_cast<std::int32_t>(i),
                 cfg.mu * r[i] * r[i] + well});
  const SparseMatrix a = SparseMatrix::from_triplets(n, n, std::move(t));
  const std::vector<double> rhs(n, well);
  return solve_keep(a, rhs, w_k, cfg.solver, g_unconverged);
}

MsResult integrate_mumford_shah(const Domain& domain, const OperatorSet& ops,
                                const GradientField& g, const PriorField& prior,
                                const MsConfig& cfg, const DepthMap& z_init) {
  validate_inputs(ops, g, prior);
  check_isolated(domain, prior);
  check_config(cfg);

  MsResult res;
  DepthMap z = z_init;
  if (z.empty()) z = integrate_quadratic(domain, ops, g, prior).z;
  if (z.size() != domain.size()) throw ConfigError("initial depth size does not match domain");
  IndicatorFields w = IndicatorFields::ones(domain.size());

  g_unconverged = &res.unconverged_solves;
  struct Reset {
    ~Reset() { g_unconverged = nullptr; }
  } reset;

  res.energy.push_back(at_energy(domain, ops, z, w, g, prior, cfg));
  for (int it = 1; it <= cfg.iterations; ++it) {
    z = ms_z_update(domain, ops, z, w, g, prior, cfg);
    res.energy.push_back(at_energy(domain, ops, z, w, g, prior, cfg));
    for (Dir d : kAllDirs) {
      w.w[dir_index(d)] = ms_w_update(domain, ops, d, z, w.w[dir_index(d)], g, cfg);
      res.energy.push_back(at_energy(domain, ops, z, w, g, prior, cfg));
    }
    res.iterations = it;
  }
  fix_free_components(domain, prior, z);
  res.z = std::move(z);
  res.w = std::move(w);
  return res;
}

}  // namespace normint
