#pragma once

#include <complex>

#include <Eigen/Core>

#include "tdqmc/grid.hpp"

namespace tdqmc {

using Complex = std::complex<double>;

/// Complex one-body wave function sampled on a Grid1D.
struct Orbital {
  Grid1D grid;
  Eigen::VectorXcd values;

  explicit Orbital(const Grid1D& g) : grid(g), values(Eigen::VectorXcd::Zero(g.size())) {}
  Orbital(const Grid1D& g, Eigen::VectorXcd v);

  template <typename F>
  static Orbital from_function(const Grid1D& g, F&& f) {
    Orbital out(g);
    for (std::size_t i = 0; i < g.size(); ++i) out.values(i) = f(g.x(i));
    return out;
  }

  std::size_t size() const noexcept { return grid.size(); }
  Complex operator()(std::size_t g) const { return values(static_cast<Eigen::Index>(g)); }
};

/// Normalized eigenfunction n of the harmonic oscillator with frequency omega
/// (hbar = m = 1), evaluated analytically on the grid.
Orbital harmonic_eigenfunction(const Grid1D& grid, int n, double omega);

}  // namespace tdqmc
