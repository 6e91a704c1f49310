#include "tdqmc/hartree_fock.hpp"

#include <cmath>

#include "tdqmc/error.hpp"
#include "tdqmc/numerics.hpp"

namespace tdqmc {

namespace {

Eigen::VectorXd weighted_density(const Orbital& phi) {
  return phi.grid.weights().cwiseProduct(phi.values.cwiseAbs2());
}

}  // namespace

Eigen::VectorXd hartree_potential(int i, const std::vector<Orbital>& orbitals,
                                  const SystemConfig& config, const Eigen::MatrixXd& interaction) {
  const Grid1D& grid = config.grid;
  Eigen::VectorXd rho = Eigen::VectorXd::Zero(grid.size());
  for (int j = 0; j < static_cast<int>(orbitals.size()); ++j)
    if (j != i) rho += weighted_density(orbitals[j]);
  return interaction * rho;
}

Eigen::VectorXd hartree_potential(int i, const std::vector<Orbital>& orbitals,
                                  const SystemConfig& config) {
  return hartree_potential(i, orbitals, config, interaction_matrix(config));
}

Orbital exchange_apply(int i, const std::vector<Orbital>& orbitals, const SystemConfig& config,
                       const Eigen::MatrixXd& interaction) {
  const Orbital& phi_i = orbitals[i];
  Orbital out(phi_i.grid);
  const Eigen::VectorXd w = phi_i.grid.weights();
  for (int j = 0; j < static_cast<int>(orbitals.size()); ++j) {
    if (j == i || config.spins[j] != config.spins[i]) continue;
    const Orbital& phi_j = orbitals[j];
    const Eigen::VectorXcd pair =
        (w.array() * phi_i.values.array() * phi_j.values.conjugate().array()).matrix();
    const Eigen::VectorXcd conv = interaction * pair;
    out.values -= (conv.array() * phi_j.values.array()).matrix();
  }
  return out;
}

Orbital exchange_apply(int i, const std::vector<Orbital>& orbitals, const SystemConfig& config) {
  return exchange_apply(i, orbitals, config, interaction_matrix(config));
}

HFEnergyReport hf_energy(const std::vector<Orbital>& orbitals, const SystemConfig& config,
                         const Eigen::MatrixXd& interaction) {
  HFEnergyReport r;
  const Eigen::VectorXd vext = confinement_potential(config.grid, config.omega);
  const Eigen::VectorXd w = config.grid.weights();
  const int n = static_cast<int>(orbitals.size());
  for (const Orbital& phi : orbitals) {
    const Orbital lap = laplacian(phi);
    r.kinetic += -0.5 * inner_product(lap, phi).real();
    r.external += w.dot(vext.cwiseProduct(phi.values.cwiseAbs2()));
  }
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd rho_i = weighted_density(orbitals[i]);
    const Eigen::VectorXd pot_i = interaction * rho_i;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      r.hartree += 0.5 * pot_i.dot(weighted_density(orbitals[j]));
      if (config.spins[i] != config.spins[j]) continue;
      // -0.5 int int V phi_i(x') phi_j*(x') phi_j(x) phi_i*(x)
      const Eigen::VectorXcd pair =
          (w.array() * orbitals[i].values.array() * orbitals[j].values.conjugate().array())
              .matrix();
      const Eigen::VectorXcd conv = interaction * pair;
      r.exchange += -0.5 * pair.dot(conv).real();
    }
  }
  r.total = r.kinetic + r.external + r.hartree + r.exchange;
  return r;
}

HFEnergyReport hf_energy(const std::vector<Orbital>& orbitals, const SystemConfig& config) {
  return hf_energy(orbitals, config, interaction_matrix(config));
}

std::vector<Orbital> harmonic_initial_orbitals(const SystemConfig& config) {
  std::vector<Orbital> out;
  for (int level : level_assignment(config.spins))
    out.push_back(harmonic_eigenfunction(config.grid, level, config.omega));
  return out;
}

void orthonormalize_spin_blocks(std::vector<Orbital>& orbitals, const std::vector<Spin>& spins) {
  for (Spin s : {Spin::up, Spin::down}) {
    std::vector<Eigen::VectorXcd*> cols;
    for (std::size_t i = 0; i < orbitals.size(); ++i)
      if (spins[i] == s) cols.push_back(&orbitals[i].values);
    if (!cols.empty()) gram_schmidt_inplace(orbitals.front().grid, cols);
  }
}

std::vector<Orbital> hf_relax_step(const std::vector<Orbital>& orbitals,
                                   const SystemConfig& config, const Eigen::MatrixXd& interaction,
                                   const Eigen::VectorXd& confinement, double dtau) {
  const int n = static_cast<int>(orbitals.size());
  std::vector<Orbital> next;
  next.reserve(orbitals.size());
  for (int i = 0; i < n; ++i) {
    Orbital phi = orbitals[i];
    phi.values -= dtau * exchange_apply(i, orbitals, config, interaction).values;
    const Eigen::VectorXd v = confinement + hartree_potential(i, orbitals, config, interaction);
    crank_nicolson_inplace(phi.values, v, config.grid.dx(), dtau);
    next.push_back(std::move(phi));
  }
  orthonormalize_spin_blocks(next, config.spins);
  return next;
}

HFState hf_solve(const SystemConfig& config, const HFOptions& options) {
  config.validate();
  const Eigen::MatrixXd interaction = interaction_matrix(config);
  const Eigen::VectorXd confinement = confinement_potential(config.grid, config.omega);

  HFState state;
  state.orbitals = harmonic_initial_orbitals(config);
  orthonormalize_spin_blocks(state.orbitals, config.spins);
  double previous = hf_energy(state.orbitals, config, interaction).total;
  state.energy_trace.push_back(previous);

  for (int step = 1; step <= options.max_steps; ++step) {
    state.orbitals = hf_relax_step(state.orbitals, config, interaction, confinement, options.dtau);
    state.energy_report = hf_energy(state.orbitals, config, interaction);
    const double e = state.energy_report.total;
    if (!std::isfinite(e)) throw NumericalError("Hartree-Fock energy became non-finite");
    state.energy_trace.push_back(e);
    state.steps = step;
    if (std::abs(e - previous) < options.tolerance) return state;
    previous = e;
  }
  throw ConvergenceError("Hartree-Fock did not converge in " + std::to_string(options.max_steps) +
                             " steps",
                         state.energy_trace);
}

}  // namespace tdqmc
