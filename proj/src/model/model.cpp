#include "tdqmc/model.hpp"

#include "tdqmc/error.hpp"

namespace tdqmc {

void SystemConfig::validate() const {
  if (n_electrons < 1) throw ConfigError("system.n_electrons", "must be at least 1");
  if (static_cast<int>(spins.size()) != n_electrons)
    throw ConfigError("system.spins", "expected " + std::to_string(n_electrons) +
                                          " labels, got " + std::to_string(spins.size()));
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw ConfigError("system.omega", "must be positive");
  if (!(softening > 0.0) || !std::isfinite(softening))
    throw ConfigError("system.softening", "must be positive");
  if (!(coupling >= 0.0) || !std::isfinite(coupling))
    throw ConfigError("system.coupling", "must be non-negative");
  if (n_walkers < 100) throw ConfigError("tdqmc.walkers", "must be at least 100");
  if (!(dtau > 0.0)) throw ConfigError("tdqmc.dtau", "must be positive");
  if (n_steps < 1) throw ConfigError("tdqmc.steps", "must be at least 1");
}

SystemConfig SystemConfig::spin_polarized(int n) {
  SystemConfig c;
  c.n_electrons = n;
  c.spins.assign(static_cast<std::size_t>(std::max(n, 0)), Spin::up);
  return c;
}

SystemConfig SystemConfig::spin_compensated(int shells) {
  SystemConfig c;
  c.n_electrons = 2 * shells;
  c.spins.clear();
  for (int l = 0; l < shells; ++l) {
    c.spins.push_back(Spin::up);
    c.spins.push_back(Spin::down);
  }
  return c;
}

int SystemConfig::count(Spin s) const {
  int n = 0;
  for (Spin t : spins) n += (t == s);
  return n;
}

std::vector<int> level_assignment(const std::vector<Spin>& spins) {
  std::vector<int> level(spins.size());
  int up = 0, down = 0;
  for (std::size_t i = 0; i < spins.size(); ++i)
    level[i] = spins[i] == Spin::up ? up++ : down++;
  return level;
}

Eigen::VectorXd confinement_potential(const Grid1D& grid, double omega) {
  Eigen::VectorXd v(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) v(g) = v_en(grid.x(g), omega);
  return v;
}

Eigen::MatrixXd interaction_matrix(const Grid1D& grid, double softening, double coupling) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index h = 0; h < n; ++h)
    for (Eigen::Index g = 0; g < n; ++g)
      m(g, h) = v_ee(grid.x(g), grid.x(h), softening, coupling);
  return m;
}

Eigen::MatrixXd interaction_matrix(const SystemConfig& config) {
  return interaction_matrix(config.grid, config.softening, config.coupling);
}

PairWidth PairWidth::from_alpha(double alpha) {
  if (!(alpha >= 0.0)) throw ConfigError("alpha", "must be non-negative");
  if (std::isinf(alpha)) return mean_field();
  if (alpha == 0.0) return local();
  return {Kind::scaled, alpha};
}

PairWidth PairWidth::from_sigma(double sigma) {
  if (!(sigma >= 0.0)) throw ConfigError("sigma", "must be non-negative");
  if (std::isinf(sigma)) return mean_field();
  if (sigma == 0.0) return local();
  return {Kind::absolute, sigma};
}

double PairWidth::sigma(double source_std) const {
  switch (kind) {
    case Kind::mean_field:
      return kInfinity;
    case Kind::local:
      return 0.0;
    case Kind::scaled:
      return sigma_from_alpha(value, source_std);
    case Kind::absolute:
      return value;
  }
  return kInfinity;
}

NonlocalityParams NonlocalityParams::ground_level(int n, double alpha) {
  NonlocalityParams p(n);
  for (int i = 1; i < n; ++i) p(0, i) = PairWidth::from_alpha(alpha);
  return p;
}

NonlocalityParams NonlocalityParams::outer_pair(int n, double sigma) {
  NonlocalityParams p(n);
  if (n >= 2) {
    p(n - 1, n - 2) = PairWidth::from_sigma(sigma);
    p(n - 2, n - 1) = PairWidth::from_sigma(sigma);
  }
  return p;
}

}  // namespace tdqmc
