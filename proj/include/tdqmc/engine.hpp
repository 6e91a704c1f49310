#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "tdqmc/hartree_fock.hpp"
#include "tdqmc/model.hpp"
#include "tdqmc/orbital.hpp"
#include "tdqmc/random.hpp"

namespace tdqmc {

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Walker positions r_i^k for N electrons x M walkers. Walker k owns
/// streams[k]; all draws for walker k come from it.
struct WalkerEnsemble {
  Eigen::MatrixXd positions;  // N x M
  std::vector<Spin> spins;
  long step_index = 0;
  std::vector<RandomStream> streams;

  int n_electrons() const { return static_cast<int>(positions.rows()); }
  std::size_t n_walkers() const { return static_cast<std::size_t>(positions.cols()); }
  /// Positions of electron j as a contiguous copy.
  std::vector<double> electron(int j) const;
};

/// Per-walker guide waves phi_i^k. waves[i] is G x M; column k is phi_i^k.
struct GuideWaveSet {
  Grid1D grid{8.0, 256};
  std::vector<Eigen::MatrixXcd> waves;

  int n_electrons() const { return static_cast<int>(waves.size()); }
  std::size_t n_walkers() const {
    return waves.empty() ? 0 : static_cast<std::size_t>(waves.front().cols());
  }
  Orbital wave(int i, std::size_t k) const;
};

struct TracePoint {
  long step;
  double energy;
  double std_error;
};

struct TDQMCState {
  WalkerEnsemble ensemble;
  GuideWaveSet guides;
  NonlocalityParams params;
  std::vector<double> reference_std;  // s_j of the initial ensemble
  std::vector<TracePoint> energy_trace;
};

enum class SigmaUpdate { per_step, frozen };

struct EngineOptions {
  std::uint64_t seed = 42;
  SigmaUpdate sigma_update = SigmaUpdate::per_step;
  std::vector<bool> frozen;  // electrons whose guides stay at the HF orbital
  int trace_every = 10;
  int threads = 1;
  double noise_scale = 1.0;      // 0 gives pure drift (test hook)
  double drift_cap = 3.0;        // |v dtau| <= drift_cap sqrt(dtau)
  double nodal_floor = 1e-6;     // relative to max|phi|
  int energy_blocks = 32;

  bool is_frozen(int i) const {
    return i < static_cast<int>(frozen.size()) && frozen[static_cast<std::size_t>(i)];
  }
};

struct EnergyEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  double exchange = 0.0;  // averaged exchange correction (already in mean)
  std::size_t excluded = 0;
  double excluded_fraction = 0.0;
};

// ---------------------------------------------------------------------------
// Kernel and effective potential
// ---------------------------------------------------------------------------

/// Gaussian window exp(-|xj - xjk|^2 / (2 sigma^2)); 1 for sigma = +inf.
/// sigma = 0 throws: the local limit must be requested explicitly.
double kernel(double xj, double xjk, double sigma);

/// Z^k_{j,i} = sum_l K(r_j^l, r_j^k, sigma).
double weight_Z(int j, std::size_t k, const WalkerEnsemble& ensemble, double sigma);

/// Source widths s_j (population std of each electron's walkers).
std::vector<double> ensemble_stds(const WalkerEnsemble& ensemble);

/// Direct evaluation of the windowed Monte Carlo interaction seen by guide
/// (i, k), summed over partners j != i. O(G M) per partner; the engine uses a
/// tabulated equivalent.
Eigen::VectorXd effective_potential(int i, std::size_t k, const WalkerEnsemble& ensemble,
                                    const NonlocalityParams& params, const SystemConfig& config,
                                    const std::vector<double>& source_std);
Eigen::VectorXd effective_potential(int i, std::size_t k, const WalkerEnsemble& ensemble,
                                    const NonlocalityParams& params, const SystemConfig& config);

/// Per-step tabulation of the same potential. For every (source j, sigma)
/// with finite sigma it stores the windowed potential with the window centred
/// on each grid node and interpolates linearly in the centre position.
class EffectivePotentialTable {
 public:
  EffectivePotentialTable(const WalkerEnsemble& ensemble, const NonlocalityParams& params,
                          const SystemConfig& config, const std::vector<double>& source_std,
                          const std::vector<bool>& targets);

  /// Potential for guide (i, k); `out` must have G entries.
  void potential(int i, std::size_t k, Eigen::Ref<Eigen::VectorXd> out) const;

 private:
  struct Window {
    int source;
    double sigma;
    Eigen::MatrixXd table;   // G x G: column c = window centred on node c
    Eigen::VectorXd weight;  // Z at each node
  };
  const WalkerEnsemble& ensemble_;
  const SystemConfig& config_;
  Grid1D grid_;
  int n_;
  std::vector<Eigen::VectorXd> mean_field_;  // per target i: summed mean-field partners
  // per (j, i): -1 none/mean field, -2 local, else index into windows_
  std::vector<int> route_;
  std::vector<Window> windows_;
  std::vector<Eigen::MatrixXd> pair_potential_;  // per source j: V(x_g, r_j^l), G x M
};

// ---------------------------------------------------------------------------
// Velocities
// ---------------------------------------------------------------------------

/// (hbar/m) Re[phi'/phi] at x. Throws NodalRegionError when |phi(x)| is below
/// nodal_floor * max|phi|.
double drift_velocity(const Orbital& phi, double x, double nodal_floor = 1e-6);

/// (hbar/m) Im[phi'/phi] at x; real-time utility.
double bohmian_velocity(const Orbital& phi, double x, double nodal_floor = 1e-6);

// ---------------------------------------------------------------------------
// Engine
// ---------------------------------------------------------------------------

class Engine {
 public:
  Engine(SystemConfig config, EngineOptions options);

  const SystemConfig& config() const { return config_; }
  const EngineOptions& options() const { return options_; }

  /// Every guide set to its HF orbital, walkers drawn from |phi_i|^2.
  TDQMCState initialize(const HFState& hf, const NonlocalityParams& params) const;

  void advance_walkers(TDQMCState& state) const;
  void propagate_guides(TDQMCState& state) const;
  /// Walkers move against the current guides, then guides relax against the
  /// moved walkers.
  void step(TDQMCState& state) const;
  void run(TDQMCState& state, int steps) const;

  EnergyEstimate energy(const TDQMCState& state) const;

  /// Widths s_j used for the next guide update.
  std::vector<double> source_widths(const TDQMCState& state) const;

  /// initialize + config.n_steps steps, energy trace recorded every
  /// options.trace_every steps and at the end.
  TDQMCState prepare_ground_state(const HFState& hf, const NonlocalityParams& params) const;

 private:
  SystemConfig config_;
  EngineOptions options_;
  Eigen::MatrixXd interaction_;
  Eigen::VectorXd confinement_;
  Eigen::VectorXd weights_;
};

WalkerEnsemble advance_walkers_step(const TDQMCState& state, const SystemConfig& config,
                                    const EngineOptions& options = {});
GuideWaveSet propagate_guides_step(const TDQMCState& state, const SystemConfig& config,
                                   const EngineOptions& options = {});
EnergyEstimate tdqmc_energy(const TDQMCState& state, const SystemConfig& config,
                            const EngineOptions& options = {});
TDQMCState prepare_ground_state(const SystemConfig& config, const NonlocalityParams& params,
                                const HFState& hf, const EngineOptions& options = {});

/// Largest |<phi_i^k, phi_j^k> - delta_ij| over walkers and equal-spin pairs.
double orthonormality_error(const GuideWaveSet& guides, const std::vector<Spin>& spins);

}  // namespace tdqmc
