#include "normint/operators.hpp"

#include <cmath>
#include <string>
#include <tuple>

#include "normint/errors.hpp"

namespace normint {

DiffMatrices build_diff_matrices(const Domain& domain) {
  const std::size_t n = domain.size();
  DiffMatrices out;
  for (Dir d : kAllDirs) {
    // Forward differences read z(next) − z(i); backward ones z(i) − z(prev).
    const bool forward = d == Dir::UPlus || d == Dir::VPlus;
    std::vector<Triplet> t;
    t.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::int32_t j = domain.sub.neighbor(d, i);
      if (j == IndexMap::kOutside) continue;
      const auto r = static_cast<std::int32_t>(i);
      t.push_back({r, r, forward ? -1.0 : 1.0});
      t.push_back({r, j, forward ? 1.0 : -1.0});
    }
    out[dir_index(d)] = SparseMatrix::from_triplets(n, n, std::move(t));
  }
  return out;
}

std::pair<SparseMatrix, SparseMatrix> build_divergence_pair(const DiffMatrices& diff) {
  const auto half_sum = [](const SparseMatrix& a, const SparseMatrix& b) {
    return add(a.transpose(), b.transpose(), 0.5, 0.5);
  };
  return {half_sum(diff[dir_index(Dir::UPlus)], diff[dir_index(Dir::UMinus)]),
          half_sum(diff[dir_index(Dir::VPlus)], diff[dir_index(Dir::VMinus)])};
}

SparseMatrix build_laplacian(const DiffMatrices& diff) {
  std::vector<Triplet> t;
  const std::size_t n = diff[0].cols();
  for (const SparseMatrix& d : diff)
    for (Triplet e : weighted_gram(d).triplets()) {
      e.value *= 0.5;
      t.push_back(e);
    }
  return SparseMatrix::from_triplets(n, n, std::move(t));
}

OperatorSet build_operators(const Domain& domain) {
  OperatorSet ops;
  ops.diff = build_diff_matrices(domain);
  std::tie(ops.d_u, ops.d_v) = build_divergence_pair(ops.diff);
  ops.laplacian = build_laplacian(ops.diff);
  return ops;
}

SparseMatrix restrict_rows(const SparseMatrix& d, const std::vector<std::uint8_t>& keep) {
  std::vector<Triplet> t;
  for (const Triplet& e : d.triplets())
    if (keep[e.row]) t.push_back(e);
  return SparseMatrix::from_triplets(d.rows(), d.cols(), std::move(t));
}

const std::vector<double>& data_for(const GradientField& g, Dir d) {
  return (d == Dir::UPlus || d == Dir::UMinus) ? g.p : g.q;
}

void validate_inputs(const OperatorSet& ops, const GradientField& g, const PriorField& prior) {
  const std::size_t n = ops.size();
  if (g.p.size() != n || g.q.size() != n)
    throw ConfigError("gradient field size does not match the domain");
  if (prior.z0.size() != n || prior.lambda.size() != n)
    throw ConfigError("prior size does not match the domain");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(prior.lambda[i] >= 0.0)) throw ConfigError("lambda must be non-negative");
    if (!std::isfinite(g.p[i]) || !std::isfinite(g.q[i]) || !std::isfinite(prior.z0[i]) ||
        !std::isfinite(prior.lambda[i]))
      throw ConfigError("non-finite input value");
  }
}

QuadraticSystem build_quadratic_system(const OperatorSet& ops, const GradientField& g,
                                       const PriorField& prior) {
  validate_inputs(ops, g, prior);
  const std::size_t n = ops.size();
  QuadraticSystem sys;
  sys.a = add(ops.laplacian, SparseMatrix::diagonal(prior.lambda));
  sys.b = ops.d_u * g.p;
  const std::vector<double> bv = ops.d_v * g.q;
  for (std::size_t i = 0; i < n; ++i) sys.b[i] += bv[i] + prior.lambda[i] * prior.z0[i];
  return sys;
}

double quadratic_energy(const OperatorSet& ops, const Domain& domain, const GradientField& g,
                        const PriorField& prior, const std::vector<double>& z) {
  double e = 0.0;
  for (Dir d : kAllDirs) {
    const std::vector<double> dz = ops[d] * z;
    const std::vector<double>& data = data_for(g, d);
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (!domain.sub.contains(d, i)) continue;
      const double r = dz[i] - data[i];
      e += 0.5 * r * r;
    }
  }
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double r = z[i] - prior.z0[i];
    e += prior.lambda[i] * r * r;
  }
  return e;
}

void check_isolated(const Domain& domain, const PriorField& prior) {
  for (std::int32_t i : domain.isolated()) {
    if (prior.lambda[i] > 0.0) continue;
    const Pixel px = domain.index.pixel(i);
    throw ConfigError("isolated pixel (" + std::to_string(px.u) + "," + std::to_string(px.v) +
                      ") has no neighbour and zero lambda");
  }
}

}  // namespace normint
