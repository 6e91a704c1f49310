#pragma once

#include <vector>

#include <Eigen/Core>

#include "tdqmc/grid.hpp"
#include "tdqmc/orbital.hpp"

namespace tdqmc {

// ---------------------------------------------------------------------------
// Finite differences (zero-Dirichlet ghost nodes outside the box)
// ---------------------------------------------------------------------------

/// Second-derivative weights (-1, 16, -30, 16, -1) / 12, fourth order.
inline constexpr double kD2Centre = -30.0 / 12.0;
inline constexpr double kD2Near = 16.0 / 12.0;
inline constexpr double kD2Far = -1.0 / 12.0;

/// Undivided second difference at node g (multiply by 1/dx^2).
template <class Vector>
auto second_difference(const Vector& phi, Eigen::Index g) {
  using Scalar = typename Vector::Scalar;
  const Eigen::Index n = phi.size();
  auto at = [&](Eigen::Index h) { return h >= 0 && h < n ? phi(h) : Scalar{}; };
  return kD2Centre * phi(g) + kD2Near * (at(g - 1) + at(g + 1)) + kD2Far * (at(g - 2) + at(g + 2));
}

Orbital laplacian(const Orbital& phi);
void laplacian_into(const Eigen::Ref<const Eigen::VectorXcd>& phi, double dx,
                    Eigen::Ref<Eigen::VectorXcd> out);

/// Central first derivative with the same ghost convention.
Orbital gradient(const Orbital& phi);

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

/// Trapezoidal <phi, chi> = sum_g w_g phi_g conj(chi_g).
Complex inner_product(const Orbital& phi, const Orbital& chi);
Complex inner_product(const Grid1D& grid, const Eigen::Ref<const Eigen::VectorXcd>& phi,
                      const Eigen::Ref<const Eigen::VectorXcd>& chi);

double norm(const Orbital& phi);
Orbital normalized(const Orbital& phi);

/// Orthonormalizes in order (modified Gram-Schmidt with one re-orthogonalization
/// pass). The first orbital is only rescaled. Throws DegeneracyError when the
/// input set is numerically rank deficient.
std::vector<Orbital> gram_schmidt(const std::vector<Orbital>& orbitals);

/// In-place variant over raw columns sharing one grid. Used by the engine for
/// per-walker blocks.
void gram_schmidt_inplace(const Grid1D& grid, std::vector<Eigen::VectorXcd*>& columns);

// ---------------------------------------------------------------------------
// Imaginary-time propagation
// ---------------------------------------------------------------------------

/// One Crank-Nicolson step of exp(-dtau H), H = -1/2 d^2/dx^2 + v_total.
/// Second-order accurate, unconditionally stable, and leaves grid eigenvectors
/// of H invariant up to scale. The result is not renormalized.
Orbital imag_time_step(const Orbital& phi, const Eigen::VectorXd& v_total, double dtau);

/// Same propagator acting in place on a column of amplitudes.
void crank_nicolson_inplace(Eigen::Ref<Eigen::VectorXcd> phi,
                            const Eigen::Ref<const Eigen::VectorXd>& v_total, double dx,
                            double dtau);

// ---------------------------------------------------------------------------
// Point evaluation
// ---------------------------------------------------------------------------

/// Linear interpolation of nodal values at x (clamped to the box).
Complex interpolate(const Grid1D& grid, const Eigen::Ref<const Eigen::VectorXcd>& values,
                    double x);

/// Expectation of -1/2 d^2/dx^2 + v on a normalized orbital.
double energy_expectation(const Orbital& phi, const Eigen::VectorXd& v);

}  // namespace tdqmc
