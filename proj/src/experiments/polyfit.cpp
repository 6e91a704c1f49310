#include <cmath>

#include <Eigen/QR>

#include "tdqmc/error.hpp"
#include "tdqmc/experiments.hpp"

namespace tdqmc {

Eigen::VectorXd polyfit(const std::vector<double>& x, const std::vector<double>& y, int degree) {
  if (x.size() != y.size()) throw Error("polyfit: x and y differ in length");
  if (degree < 0 || x.size() <= static_cast<std::size_t>(degree))
    throw Error("polyfit: need more points than the polynomial degree");
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd a(n, degree + 1);
  Eigen::VectorXd b(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    double p = 1.0;
    for (int c = 0; c <= degree; ++c, p *= x[static_cast<std::size_t>(r)]) a(r, c) = p;
    b(r) = y[static_cast<std::size_t>(r)];
  }
  return a.colPivHouseholderQr().solve(b);
}

double polyval(const Eigen::VectorXd& c, double x) {
  double y = 0.0;
  for (Eigen::Index p = c.size(); p-- > 0;) y = y * x + c(p);
  return y;
}

FitMinimum polynomial_minimum(const Eigen::VectorXd& c, double lo, double hi) {
  constexpr int kSamples = 4000;
  int best = 0;
  double best_y = polyval(c, lo);
  for (int s = 1; s <= kSamples; ++s) {
    const double y = polyval(c, lo + (hi - lo) * s / kSamples);
    if (y < best_y) {
      best_y = y;
      best = s;
    }
  }
  if (best == 0 || best == kSamples) return {best == 0 ? lo : hi, best_y, true};
  // golden-section polish inside the bracketing samples
  double a = lo + (hi - lo) * (best - 1) / kSamples;
  double b = lo + (hi - lo) * (best + 1) / kSamples;
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 60; ++it) {
    const double m1 = b - r * (b - a), m2 = a + r * (b - a);
    if (polyval(c, m1) < polyval(c, m2)) b = m2;
    else a = m1;
  }
  const double xm = 0.5 * (a + b);
  return {xm, polyval(c, xm), false};
}

}  // namespace tdqmc
