#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "tdqmc/engine.hpp"
#include "tdqmc/grid.hpp"
#include "tdqmc/model.hpp"

namespace tdqmc {

/// One-body reduced density matrix rho(x, x') on a grid, stored so that
/// rho(g, h) = rho(x_g, x_h) and normalized to unit quadrature trace.
struct DensityMatrix {
  Grid1D grid;
  Eigen::MatrixXcd rho;
};

/// Scales rho so that sum_g w_g rho(g, g) = 1.
DensityMatrix trace_normalized(DensityMatrix dm);

double quadrature_trace(const DensityMatrix& dm);

/// Tr(rho^2) with quadrature weights on both contracted indices.
double purity(const DensityMatrix& dm);

struct DensityMatrixChecks {
  double hermiticity_error;  // max |rho - rho^dagger|
  double trace_error;        // |Tr rho - 1|
  double min_eigenvalue;     // of W^{1/2} rho W^{1/2}
};
DensityMatrixChecks check_density_matrix(const DensityMatrix& dm);

/// rho_i(x, x') = (1/M) sum_k phi_i^k*(x) phi_i^k(x').
DensityMatrix rdm_distinguishable(int i, const GuideWaveSet& guides);

/// Spin-resolved RDM of the per-walker Slater determinants, averaged over
/// walkers. Orthonormal per-walker blocks use the projector closed form;
/// blocks violating orthonormality by more than 1e-6 go through the
/// overlap-inverse form, and `fallbacks` (if given) counts them.
DensityMatrix rdm_identical(Spin spin, const GuideWaveSet& guides, const std::vector<Spin>& spins,
                            std::size_t* fallbacks = nullptr);

/// RDM of one Slater determinant built from arbitrary (linearly independent)
/// orbitals, via the overlap-matrix inverse.
DensityMatrix slater_rdm(const Grid1D& grid, const std::vector<Eigen::VectorXcd>& orbitals);

/// 1 - Tr(rho^2).
double linear_entropy_distinguishable(const DensityMatrix& rho);

struct IdenticalEntropy {
  double value;  // clamped at 0
  double raw;    // 1 - N Tr(rho^2) before clamping
};
/// 1 - N Tr(rho^2) for N same-spin fermions.
IdenticalEntropy linear_entropy_identical(const DensityMatrix& rho, int n_same_spin);

/// CSV rows "x,x_prime,re,im" with a header line.
void write_density_matrix_csv(std::ostream& os, const DensityMatrix& dm);

}  // namespace tdqmc
