#include "normint/quadratic.hpp"

namespace normint {

void fix_free_components(const Domain& domain, const PriorField& prior, DepthMap& z) {
  int count = 0;
  const std::vector<std::int32_t> label = domain.components(&count);
  std::vector<double> lam(count, 0.0), dz(count, 0.0);
  std::vector<std::size_t> size(count, 0);
  for (std::size_t i = 0; i < z.size(); ++i) {
    lam[label[i]] += prior.lambda[i];
    dz[label[i]] += prior.z0[i] - z[i];
    ++size[label[i]];
  }
  for (std::size_t i = 0; i < z.size(); ++i) {
    const int c = label[i];
    if (lam[c] == 0.0) z[i] += dz[c] / static_cast<double>(size[c]);
  }
}

QuadraticResult integrate_quadratic(const Domain& domain, const OperatorSet& ops,
                                    const GradientField& g, const PriorField& prior,
                                    const SolverConfig& cfg) {
  const QuadraticSystem sys = build_quadratic_system(ops, g, prior);
  check_isolated(domain, prior);
  SolveResult s = pcg_solve(sys.a, sys.b, prior.z0, cfg);
  fix_free_components(domain, prior, s.x);
  return {std::move(s.x), s.iterations, s.residual};
}

QuadraticResult integrate_quadratic(const Domain& domain, const GradientField& g,
                                    const PriorField& prior, const SolverConfig& cfg) {
  return integrate_quadratic(domain, build_operators(domain), g, prior, cfg);
}

}  // namespace normint
