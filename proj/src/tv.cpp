#include "normint/tv.hpp"

#include <cmath>

#include "normint/errors.hpp"
#include "normint/kernels.hpp"
#include "normint/quadratic.hpp"

namespace normint {

std::array<double, 2> tv_shrinkage(std::array<double, 2> s, double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
  const double n = std::hypot(s[0], s[1]);
  const double t = 4.0 / alpha;
  if (n <= t) return {0.0, 0.0};
  const double f = (n - t) / n;
  return {f * s[0], f * s[1]};
}

TvOperators build_tv_operators(const Domain& domain, const OperatorSet& ops) {
  TvOperators tv;
  const std::size_t n = domain.size();
  for (std::size_t k = 0; k < kQuadrants.size(); ++k) {
    const Quadrant q = kQuadrants[k];
    std::vector<std::uint8_t> keep(n, 0);
    for (std::size_t i = 0; i < n; ++i) keep[i] = domain.sub.contains(q, i) ? 1 : 0;
    tv.du[k] = restrict_rows(ops[u_dir(q.u)], keep);
    tv.dv[k] = restrict_rows(ops[v_dir(q.v)], keep);
    tv.members[k] = domain.sub.members(q);
  }
  return tv;
}

SparseMatrix build_tv_matrix(const TvOperators& tv, const PriorField& prior, double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
  const std::size_t n = prior.lambda.size();
  std::vector<Triplet> t;
  for (std::size_t k = 0; k < 4; ++k) {
    for (const SparseMatrix* d : {&tv.du[k], &tv.dv[k]})
      for (Triplet e : weighted_gram(*d).triplets()) {
        e.value *= alpha / 8.0;
        t.push_back(e);
      }
  }
  for (std::size_t i = 0; i < n; ++i)
    t.push_back({static_cast<std::int32_t>(i), static_cast<std::int32_t>(i), prior.lambda[i]});
  return SparseMatrix::from_triplets(n, n, std::move(t));
}

double tv_energy(const TvOperators& tv, const GradientField& g, const PriorField& prior,
                 const DepthMap& z) {
  double e = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    const std::vector<double> gu = tv.du[k] * z;
    const std::vector<double> gv = tv.dv[k] * z;
    for (std::int32_t i : tv.members[k]) e += 0.25 * std::hypot(gu[i] - g.p[i], gv[i] - g.q[i]);
  }
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double r = z[i] - prior.z0[i];
    e += prior.lambda[i] * r * r;
  }
  return e;
}

AdmmState AdmmState::zeros(const TvOperators& tv, DepthMap z) {
  AdmmState s;
  s.z = std::move(z);
  for (std::size_t k = 0; k < 4; ++k) {
    const std::size_t m = tv.members[k].size();
    s.ru[k].assign(m, 0.0);
    s.rv[k].assign(m, 0.0);
    s.bu[k].assign(m, 0.0);
    s.bv[k].assign(m, 0.0);
  }
  return s;
}

DepthMap tv_z_update(const AdmmState& state, const TvOperators& tv, const SparseMatrix& a_tv,
                     const Preconditioner* pre, const GradientField& g, const PriorField& prior,
                     const TvConfig& cfg) {
  const std::size_t n = state.z.size();
  std::vector<double> rhs(n, 0.0);
  std::vector<double> pu(n), pv(n);
  for (std::size_t k = 0; k < 4; ++k) {
    std::fill(pu.begin(), pu.end(), 0.0);
    std::fill(pv.begin(), pv.end(), 0.0);
    const auto& mem = tv.members[k];
    for (std::size_t m = 0; m < mem.size(); ++m) {
      const std::int32_t i = mem[m];
      pu[i] = g.p[i] + state.ru[k][m] - state.bu[k][m];
      pv[i] = g.q[i] + state.rv[k][m] - state.bv[k][m];
    }
    const std::vector<double> tu = tv.du[k].multiply_transposed(pu);
    const std::vector<double> tvv = tv.dv[k].multiply_transposed(pv);
    for (std::size_t i = 0; i < n; ++i) rhs[i] += cfg.alpha / 8.0 * (tu[i] + tvv[i]);
  }
  for (std::size_t i = 0; i < n; ++i) rhs[i] += prior.lambda[i] * prior.z0[i];
  return pcg_solve(a_tv, rhs, state.z, cfg.solver, pre).x;
}

TvResult integrate_tv(const Domain& domain, const OperatorSet& ops, const GradientField& g,
                      const PriorField& prior, const TvConfig& cfg, const DepthMap& z_init) {
  validate_inputs(ops, g, prior);
  check_isolated(domain, prior);
  if (!(cfg.alpha > 0.0)) throw ConfigError("alpha must be positive");
  if (cfg.iterations < 0) throw ConfigError("iteration budget must be non-negative");

  const TvOperators tv = build_tv_operators(domain, ops);
  const SparseMatrix a_tv = build_tv_matrix(tv, prior, cfg.alpha);
  const auto pre = Preconditioner::build(a_tv, cfg.solver);

  DepthMap z0 = z_init;
  if (z0.empty()) z0 = integrate_quadratic(domain, ops, g, prior, cfg.solver).z;
  if (z0.size() != domain.size()) throw ConfigError("initial depth size does not match domain");

  AdmmState st = AdmmState::zeros(tv, std::move(z0));
  TvResult res;
  const double thresh = 4.0 / cfg.alpha;
  const double stop = cfg.residual_tol * static_cast<double>(domain.size());

  std::vector<double> su, sv;
  for (int it = 1; it <= cfg.iterations; ++it) {
    st.z = tv_z_update(st, tv, a_tv, pre.get(), g, prior, cfg);
    double primal = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
      const auto& mem = tv.members[k];
      const std::vector<double> gu = tv.du[k] * st.z;
      const std::vector<double> gv = tv.dv[k] * st.z;
      su.resize(mem.size());
      sv.resize(mem.size());
      for (std::size_t m = 0; m < mem.size(); ++m) {
        su[m] = gu[mem[m]] - g.p[mem[m]] + st.bu[k][m];
        sv[m] = gv[mem[m]] - g.q[mem[m]] + st.bv[k][m];
      }
      kernels::shrink2(su, sv, thresh, st.ru[k], st.rv[k]);
      for (std::size_t m = 0; m < mem.size(); ++m) {
        const double eu = gu[mem[m]] - g.p[mem[m]] - st.ru[k][m];
        const double ev = gv[mem[m]] - g.q[mem[m]] - st.rv[k][m];
        st.bu[k][m] += eu;
        st.bv[k][m] += ev;
        primal += std::hypot(eu, ev);
      }
    }
    st.iteration = it;
    res.primal_residual.push_back(primal);
    res.energy.push_back(tv_energy(tv, g, prior, st.z));
    if (primal < stop) break;
  }
  fix_free_components(domain, prior, st.z);
  res.z = std::move(st.z);
  res.iterations = st.iteration;
  return res;
}

}  // namespace normint
