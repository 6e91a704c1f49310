#pragma once

#include <vector>

#include <Eigen/Core>

#include "tdqmc/model.hpp"
#include "tdqmc/orbital.hpp"

namespace tdqmc {

struct HFEnergyReport {
  double kinetic = 0.0;
  double external = 0.0;
  double hartree = 0.0;
  double exchange = 0.0;  // <= 0
  double total = 0.0;
};

struct HFState {
  std::vector<Orbital> orbitals;
  HFEnergyReport energy_report;
  int steps = 0;
  std::vector<double> energy_trace;
};

struct HFOptions {
  double dtau = 0.02;
  int max_steps = 20000;
  double tolerance = 1e-9;  // |E_n - E_{n-1}| at convergence
};

/// Hartree potential of electron i: sum_{j != i} int V(x, x') |phi_j(x')|^2 dx'.
Eigen::VectorXd hartree_potential(int i, const std::vector<Orbital>& orbitals,
                                  const SystemConfig& config);
Eigen::VectorXd hartree_potential(int i, const std::vector<Orbital>& orbitals,
                                  const SystemConfig& config,
                                  const Eigen::MatrixXd& interaction);

/// Action of the exchange term on phi_i:
///   -sum_{j != i, s_j = s_i} [int V(x, x') phi_i(x') phi_j*(x') dx'] phi_j(x).
/// Equals V^X phi_i without dividing by phi_i.
Orbital exchange_apply(int i, const std::vector<Orbital>& orbitals, const SystemConfig& config);
Orbital exchange_apply(int i, const std::vector<Orbital>& orbitals, const SystemConfig& config,
                       const Eigen::MatrixXd& interaction);

HFEnergyReport hf_energy(const std::vector<Orbital>& orbitals, const SystemConfig& config);
HFEnergyReport hf_energy(const std::vector<Orbital>& orbitals, const SystemConfig& config,
                         const Eigen::MatrixXd& interaction);

/// Harmonic eigenfunctions placed on the levels of `level_assignment`.
std::vector<Orbital> harmonic_initial_orbitals(const SystemConfig& config);

/// Self-consistent HF by imaginary-time relaxation with per-spin-block
/// Gram-Schmidt after every step. Throws ConvergenceError when the energy
/// has not settled within options.max_steps.
HFState hf_solve(const SystemConfig& config, const HFOptions& options = {});

/// One relaxation step of every orbital (exchange applied as a first-order
/// split ahead of the local Crank-Nicolson step), followed by orthonormalization.
/// Exposed for tests.
std::vector<Orbital> hf_relax_step(const std::vector<Orbital>& orbitals,
                                   const SystemConfig& config, const Eigen::MatrixXd& interaction,
                                   const Eigen::VectorXd& confinement, double dtau);

/// Orthonormalize within each equal-spin block, keeping index order.
void orthonormalize_spin_blocks(std::vector<Orbital>& orbitals, const std::vector<Spin>& spins);

}  // namespace tdqmc
