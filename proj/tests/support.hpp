#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "tdqmc/grid.hpp"
#include "tdqmc/numerics.hpp"
#include "tdqmc/orbital.hpp"

namespace tdqmc::testing {

// Continuous harmonic-oscillator eigenfunction (omega = 1) by Hermite
// recursion, independent of the library's grid sampler.
inline double ho(int n, double x) {
  double h0 = 1.0, h1 = 2.0 * x;
  if (n == 0) return std::exp(-0.5 * x * x) / std::pow(M_PI, 0.25);
  for (int k = 1; k < n; ++k) {
    const double h2 = 2.0 * x * h1 - 2.0 * k * h0;
    h0 = h1;
    h1 = h2;
  }
  double fact = 1.0;
  for (int k = 2; k <= n; ++k) fact *= k;
  return h1 * std::exp(-0.5 * x * x) / std::sqrt(std::pow(2.0, n) * fact * std::sqrt(M_PI));
}

inline Orbital sampled(const Grid1D& grid, int n) {
  Orbital o(grid);
  for (std::size_t g = 0; g < grid.size(); ++g) o.values(static_cast<Eigen::Index>(g)) = ho(n, grid.x(g));
  return o;
}

// Dense matrix of -1/2 d^2/dx^2 + v with the same five-point stencil and
// zero ghosts, for brute-force diagonalization.
inline Eigen::MatrixXd dense_hamiltonian(const Grid1D& grid, const Eigen::VectorXd& v) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  const double s = -0.5 / (grid.dx() * grid.dx());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index g = 0; g < n; ++g) {
    h(g, g) = s * (-30.0 / 12.0) + v(g);
    if (g + 1 < n) h(g, g + 1) = h(g + 1, g) = s * (16.0 / 12.0);
    if (g + 2 < n) h(g, g + 2) = h(g + 2, g) = s * (-1.0 / 12.0);
  }
  return h;
}

}  // namespace tdqmc::testing
