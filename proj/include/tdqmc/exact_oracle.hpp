#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tdqmc/entanglement.hpp"
#include "tdqmc/grid.hpp"
#include "tdqmc/model.hpp"

namespace tdqmc {

enum class Symmetry { none, symmetric, antisymmetric };

/// Full N-electron wave function on a tensor-product grid. Electron 0 is the
/// slowest-varying index. `blocks` lists the coordinate groups the declared
/// symmetry acts on.
struct TensorWavefunction {
  int n_electrons = 0;
  Grid1D grid{8.0, 64};
  Eigen::VectorXcd amplitudes;
  Symmetry symmetry = Symmetry::none;
  std::vector<std::vector<int>> blocks;

  std::size_t index(const std::vector<std::size_t>& coords) const;
};

struct OracleOptions {
  Grid1D grid{8.0, 64};
  double dtau = 0.05;
  int max_steps = 20000;
  double tolerance = 1e-9;         // energy drift per step
  std::size_t capacity = 1u << 23; // amplitude count cap
  int check_every = 10;
};

/// Blocks a symmetry acts on for the given spins: one block of everyone for
/// `symmetric`, the equal-spin groups for `antisymmetric`, none otherwise.
std::vector<std::vector<int>> symmetry_blocks(Symmetry symmetry, const std::vector<Spin>& spins);

/// Throws CapacityError if G^N exceeds the cap or N > 4.
void check_capacity(int n_electrons, std::size_t points_per_axis, std::size_t capacity);

/// H psi with H = sum_i (-1/2 d_i^2 + v_en(x_i)) + sum_{i<j} v_ee(x_i, x_j), matrix free.
TensorWavefunction hamiltonian_apply(const TensorWavefunction& psi, const SystemConfig& config);

/// Averages over the permutations of each block (with sign for the
/// antisymmetric case) and renormalizes. Throws SymmetryError if the
/// projection annihilates the state.
TensorWavefunction symmetry_project(const TensorWavefunction& psi, Symmetry symmetry,
                                    const std::vector<std::vector<int>>& blocks);
TensorWavefunction symmetry_project(const TensorWavefunction& psi);

/// Product state phi_0(x_0) phi_1(x_1) ... on the tensor grid.
TensorWavefunction product_state(const std::vector<Eigen::VectorXcd>& orbitals, const Grid1D& grid);

double tensor_norm(const TensorWavefunction& psi);
Complex tensor_inner(const TensorWavefunction& a, const TensorWavefunction& b);
double rayleigh_quotient(const TensorWavefunction& psi, const SystemConfig& config);

/// Largest |psi - (+/-) P psi| over the transpositions of each block.
double symmetry_violation(const TensorWavefunction& psi);

struct OracleResult {
  TensorWavefunction psi;
  double energy = 0.0;
  int steps = 0;
};

/// Imaginary-time relaxation (Strang split: half potential, per-axis
/// Crank-Nicolson kinetic, half potential) with projection every step.
/// Starts from harmonic levels chosen by level_assignment.
OracleResult exact_ground_state(const SystemConfig& config, Symmetry symmetry,
                                const OracleOptions& options = {});

/// rho(x, x') = int psi*(x, rest) psi(x', rest) d rest for electron `electron`,
/// trace normalized.
DensityMatrix exact_one_body_rdm(const TensorWavefunction& psi, int electron = 0);

// ---------------------------------------------------------------------------
// Reference file: versioned text, one entry per line.
// ---------------------------------------------------------------------------

struct OracleReference {
  std::string fingerprint;  // system + oracle-grid fingerprint
  std::string label;
  int n_electrons = 0;
  std::string spins;
  double energy = 0.0;
  double entropy_distinguishable = 0.0;  // 1 - Tr rho^2 of electron 0
  double entropy_identical = 0.0;        // 1 - N_up Tr rho_up^2
  std::size_t points = 0;
};

std::string oracle_fingerprint(const SystemConfig& config, const OracleOptions& options,
                               Symmetry symmetry);
OracleReference make_reference(const SystemConfig& config, const OracleOptions& options,
                               Symmetry symmetry, const OracleResult& result);

void append_reference(const std::string& path, const OracleReference& ref);
std::vector<OracleReference> read_references(const std::string& path);

}  // namespace tdqmc
