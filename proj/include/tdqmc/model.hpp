#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tdqmc/grid.hpp"

namespace tdqmc {

enum class Spin : unsigned char { up, down };

inline char spin_char(Spin s) { return s == Spin::up ? 'u' : 'd'; }

/// Physical system plus the discretization it is solved on (atomic units).
struct SystemConfig {
  int n_electrons = 1;
  std::vector<Spin> spins{Spin::up};
  double omega = 1.0;
  double softening = 1.0;     // soft-core length a
  double coupling = 1.0;      // e^2; 0 switches the e-e interaction off
  std::size_t n_walkers = 5000;
  Grid1D grid{8.0, 256};
  double dtau = 0.01;
  int n_steps = 200;

  /// Throws ConfigError naming the offending field.
  void validate() const;

  /// One same-spin electron per level.
  static SystemConfig spin_polarized(int n);
  /// Two opposite-spin electrons per level; electron 2l is up, 2l+1 is down.
  static SystemConfig spin_compensated(int shells);

  int count(Spin s) const;
};

/// Level index of every electron inside its spin block: the l-th electron of
/// a given spin occupies harmonic level l.
std::vector<int> level_assignment(const std::vector<Spin>& spins);

inline double v_en(double x, double omega) { return 0.5 * omega * omega * x * x; }

/// Soft-core repulsion e^2 / sqrt(r^2 + a^2).
inline double v_ee(double xi, double xj, double a, double e2 = 1.0) {
  const double r = xi - xj;
  return e2 / std::sqrt(r * r + a * a);
}

/// v_en sampled on the grid.
Eigen::VectorXd confinement_potential(const Grid1D& grid, double omega);

/// Dense G x G matrix V(x_g, x_h) = coupling * v_ee(x_g, x_h). Convolutions
/// against densities are matrix-vector products with quadrature weights
/// applied to the density side.
Eigen::MatrixXd interaction_matrix(const SystemConfig& config);
Eigen::MatrixXd interaction_matrix(const Grid1D& grid, double softening, double coupling);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// sigma_{j,i} = alpha_{j,i} s_j; +inf propagates.
inline double sigma_from_alpha(double alpha, double s) {
  if (std::isinf(alpha)) return kInfinity;
  return alpha * s;
}

/// Kernel width setting for one ordered pair (source electron j,
/// target electron i).
struct PairWidth {
  enum class Kind : unsigned char { mean_field, local, scaled, absolute };
  Kind kind = Kind::mean_field;
  double value = 0.0;  // alpha for `scaled`, sigma for `absolute`

  static PairWidth mean_field() { return {Kind::mean_field, 0.0}; }
  static PairWidth local() { return {Kind::local, 0.0}; }
  /// alpha = +inf maps to mean field, alpha = 0 to the local limit.
  static PairWidth from_alpha(double alpha);
  /// sigma = +inf maps to mean field, sigma = 0 to the local limit.
  static PairWidth from_sigma(double sigma);

  /// Resolved sigma given the live ensemble std of the source electron.
  /// +inf for mean field, 0 for local.
  double sigma(double source_std) const;

  bool operator==(const PairWidth&) const = default;
};

/// Dense N x N table of pair widths, entry (j, i).
class NonlocalityParams {
 public:
  NonlocalityParams() = default;
  explicit NonlocalityParams(int n) : n_(n), widths_(static_cast<std::size_t>(n * n)) {}

  int size() const noexcept { return n_; }
  const PairWidth& operator()(int j, int i) const { return widths_[idx(j, i)]; }
  PairWidth& operator()(int j, int i) { return widths_[idx(j, i)]; }

  /// All pairs at the mean-field limit.
  static NonlocalityParams mean_field(int n) { return NonlocalityParams(n); }
  /// Ground-level nonlocality: (0, i) = alpha for every i != 0, rest mean field.
  static NonlocalityParams ground_level(int n, double alpha);
  /// Outermost opposite-spin pair at fixed sigma (both directions), rest mean field.
  static NonlocalityParams outer_pair(int n, double sigma);

  bool operator==(const NonlocalityParams&) const = default;

 private:
  std::size_t idx(int j, int i) const { return static_cast<std::size_t>(j * n_ + i); }
  int n_ = 0;
  std::vector<PairWidth> widths_;
};

}  // namespace tdqmc
