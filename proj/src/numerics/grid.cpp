#include "tdqmc/grid.hpp"

#include <algorithm>
#include <cmath>

#include "tdqmc/error.hpp"
#include "tdqmc/orbital.hpp"

namespace tdqmc {

Grid1D::Grid1D(double half_width, std::size_t n_points) : half_width_(half_width), n_(n_points) {
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw ConfigError("grid.half_width", "must be positive and finite");
  if (n_points < 8) throw ConfigError("grid.points", "need at least 8 points");
  dx_ = 2.0 * half_width / static_cast<double>(n_points - 1);
}

Eigen::VectorXd Grid1D::weights() const {
  Eigen::VectorXd w(n_);
  for (std::size_t g = 0; g < n_; ++g) w(g) = weight(g);
  return w;
}

Eigen::VectorXd Grid1D::coordinates() const {
  Eigen::VectorXd x(n_);
  for (std::size_t g = 0; g < n_; ++g) x(g) = this->x(g);
  return x;
}

Grid1D::Locator Grid1D::locate(double x) const noexcept {
  const double s = (x + half_width_) / dx_;
  if (!(s > 0.0)) return {0, 0.0};
  const double last = static_cast<double>(n_ - 1);
  if (s >= last) return {n_ - 2, 1.0};
  const auto cell = static_cast<std::size_t>(s);
  return {cell, s - static_cast<double>(cell)};
}

Orbital::Orbital(const Grid1D& g, Eigen::VectorXcd v) : grid(g), values(std::move(v)) {
  if (static_cast<std::size_t>(values.size()) != g.size())
    throw GridMismatchError();
}

Orbital harmonic_eigenfunction(const Grid1D& grid, int n, double omega) {
  // Hermite recursion on the scaled coordinate; normalization folded into the
  // recursion so large n does not overflow.
  const double scale = std::sqrt(omega);
  const double pref = std::pow(omega / M_PI, 0.25);
  return Orbital::from_function(grid, [&](double x) {
    const double y = scale * x;
    double h_prev = 0.0;
    double h = pref * std::exp(-0.5 * y * y);
    for (int k = 1; k <= n; ++k) {
      const double next = std::sqrt(2.0 / k) * y * h - std::sqrt((k - 1.0) / k) * h_prev;
      h_prev = h;
      h = next;
    }
    return Complex(h, 0.0);
  });
}

}  // namespace tdqmc
