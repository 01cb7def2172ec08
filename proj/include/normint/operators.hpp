#pragma once

// Finite-difference operators over a masked domain and the quadratic
// normal equations built from them.

#include <array>
#include <iosfwd>
#include <vector>

#include "normint/domain.hpp"
#include "normint/fields.hpp"
#include "normint/sparse.hpp"

namespace normint {

/// The four first-order difference matrices, indexed by dir_index(Dir).
/// All are |Ω|×|Ω|; row i is zero when pixel i has no neighbour along d.
using DiffMatrices = std::array<SparseMatrix, 4>;

struct OperatorSet {
  DiffMatrices diff;
  SparseMatrix d_u;        // ½(D_u⁺ᵀ + D_u⁻ᵀ)
  SparseMatrix d_v;        // ½(D_v⁺ᵀ + D_v⁻ᵀ)
  SparseMatrix laplacian;  // ½ Σ_d D_dᵀ D_d

  const SparseMatrix& operator[](Dir d) const { return diff[dir_index(d)]; }
  std::size_t size() const noexcept { return laplacian.rows(); }
};

DiffMatrices build_diff_matrices(const Domain& domain);
std::pair<SparseMatrix, SparseMatrix> build_divergence_pair(const DiffMatrices& diff);
SparseMatrix build_laplacian(const DiffMatrices& diff);
OperatorSet build_operators(const Domain& domain);

/// Copy of `d` with rows outside `keep` zeroed (rows are kept, entries dropped).
SparseMatrix restrict_rows(const SparseMatrix& d, const std::vector<std::uint8_t>& keep);

/// Observation matched against the difference along d: p for u, q for v.
const std::vector<double>& data_for(const GradientField& g, Dir d);

struct QuadraticSystem {
  SparseMatrix a;  // L + Λ²
  std::vector<double> b;  // D_u p + D_v q + Λ² z⁰
};

/// Throws ConfigError on negative λ or mismatched sizes.
QuadraticSystem build_quadratic_system(const OperatorSet& ops, const GradientField& g,
                                       const PriorField& prior);

void validate_inputs(const OperatorSet& ops, const GradientField& g, const PriorField& prior);

/// ½ Σ_d Σ_{i∈Ω_d} (D_d z − g_d)_i² + Σ λ_i (z_i − z⁰_i)².
double quadratic_energy(const OperatorSet& ops, const Domain& domain, const GradientField& g,
                        const PriorField& prior, const std::vector<double>& z);

/// Rejects pixels with no neighbour at all and λ = 0 (singular system).
void check_isolated(const Domain& domain, const PriorField& prior);

}  // namespace normint
