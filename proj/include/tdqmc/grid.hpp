#pragma once

#include <cstddef>

#include <Eigen/Core>

namespace tdqmc {

/// Uniform grid on [-half_width, half_width] with n_points nodes, both ends
/// included. Every orbital and density matrix in the library lives on one.
class Grid1D {
 public:
  Grid1D(double half_width, std::size_t n_points);

  double x_min() const noexcept { return -half_width_; }
  double x_max() const noexcept { return half_width_; }
  double half_width() const noexcept { return half_width_; }
  std::size_t size() const noexcept { return n_; }
  double dx() const noexcept { return dx_; }
  double x(std::size_t g) const noexcept { return -half_width_ + static_cast<double>(g) * dx_; }

  /// Trapezoidal quadrature weight of node g.
  double weight(std::size_t g) const noexcept {
    return (g == 0 || g + 1 == n_) ? 0.5 * dx_ : dx_;
  }
  Eigen::VectorXd weights() const;
  Eigen::VectorXd coordinates() const;

  bool contains(double x) const noexcept { return x > -half_width_ && x < half_width_; }

  /// Cell lookup for linear interpolation: x lies in [x(cell), x(cell+1)],
  /// frac in [0,1]. Positions outside the box are clamped.
  struct Locator {
    std::size_t cell;
    double frac;
  };
  Locator locate(double x) const noexcept;

  bool operator==(const Grid1D& other) const noexcept {
    return n_ == other.n_ && half_width_ == other.half_width_;
  }

 private:
  double half_width_;
  std::size_t n_;
  double dx_;
};

}  // namespace tdqmc
