#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tdqmc/engine.hpp"
#include "tdqmc/exact_oracle.hpp"
#include "tdqmc/hartree_fock.hpp"

namespace tdqmc {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------------------
// Polynomial least squares
// ---------------------------------------------------------------------------

/// Coefficients c_0..c_d of sum_p c_p x^p minimizing the squared residual.
Eigen::VectorXd polyfit(const std::vector<double>& x, const std::vector<double>& y, int degree);
double polyval(const Eigen::VectorXd& coefficients, double x);

struct FitMinimum {
  double x;
  double y;
  bool at_boundary;
};
/// Minimum of the polynomial on [lo, hi]; at_boundary when it sits on an end.
FitMinimum polynomial_minimum(const Eigen::VectorXd& coefficients, double lo, double hi);

// ---------------------------------------------------------------------------
// Scans
// ---------------------------------------------------------------------------

/// Which pairs the scanned value is applied to. `ground`: (0, i) for every
/// i >= 1, everything else mean field. `outer`: the last two electrons in
/// both directions.
enum class ScanPairs { ground, outer };
/// Whether scan values are alpha (sigma = alpha s_j) or sigma directly.
enum class ScanVariable { alpha, sigma };

struct ScanSpec {
  ScanPairs pairs = ScanPairs::outer;
  ScanVariable variable = ScanVariable::sigma;
  std::vector<double> values;
  int fit_degree = 4;
  /// Rerun at the fitted optimum to measure entropies there.
  bool evaluate_optimum = true;

  /// Throws ConfigError: at least 5 finite non-negative values spanning a
  /// factor of 4, and more values than the fit degree.
  void validate() const;
};

NonlocalityParams scan_params(int n_electrons, const ScanSpec& spec, double value);

/// Observables of one converged TDQMC run.
struct RunSummary {
  double value = kNaN;  // scan coordinate
  EnergyEstimate energy;
  double entropy_identical = 0.0;      // clamped, for the spin of electron 0
  double entropy_identical_raw = 0.0;
  std::vector<double> entropy_distinguishable;  // per electron
  std::vector<double> source_std;               // s_j at the end of the run
  std::size_t rdm_fallbacks = 0;
};

RunSummary summarize(const TDQMCState& state, const SystemConfig& config, const Engine& engine);

struct ScanResult {
  ScanSpec spec;
  std::vector<RunSummary> points;
  Eigen::VectorXd fit;        // coefficients, low order first
  double fit_rms = 0.0;       // residual RMS of the fit
  double median_se = 0.0;     // median standard error of the scanned energies
  double value_star = kNaN;   // fitted minimum
  double energy_star = kNaN;
  double raw_min_value = kNaN;
  double raw_min_energy = kNaN;
  bool boundary_minimum = false;
  std::optional<RunSummary> at_optimum;  // rerun at value_star

  bool fit_consistent() const { return fit_rms <= 3.0 * median_se; }
};

/// Every point shares options.seed (common random numbers).
ScanResult alpha_scan(const SystemConfig& config, const HFState& hf, const ScanSpec& spec,
                      const EngineOptions& options);
ScanResult alpha_scan(const SystemConfig& config, const ScanSpec& spec, const EngineOptions& options,
                      const HFOptions& hf_options = {});

// ---------------------------------------------------------------------------
// Series
// ---------------------------------------------------------------------------

enum class SeriesKind { polarized, compensated };

struct SeriesRow {
  int size = 0;  // electrons (polarized) or shells (compensated)
  int n_electrons = 0;
  double e_tdqmc = kNaN;
  double se_tdqmc = kNaN;
  double e_hf = kNaN;
  double e_oracle = kNaN;
  double entropy_identical = kNaN;
  double entropy_identical_raw = kNaN;
  double entropy_oracle = kNaN;  // same measure from the exact state
  std::vector<double> entropy_distinguishable;
  double alpha_star = kNaN;
  double sigma_star = kNaN;
  bool boundary_minimum = false;
  double e_unfrozen = kNaN;  // compensated only, when requested
  std::optional<ScanResult> scan;
};

struct SeriesReport {
  SeriesKind kind = SeriesKind::polarized;
  std::vector<SeriesRow> rows;
};

struct SeriesOptions {
  int max_size = 4;
  ScanSpec scan;  // pairs/variable are set by the series kind
  EngineOptions engine;
  HFOptions hf;
  bool run_oracle = true;
  int oracle_max_electrons = 4;
  OracleOptions oracle;                 // dtau, tolerance, capacity
  std::map<int, Grid1D> oracle_grids;   // per electron count; default below
  bool check_unfrozen = false;
};

/// Oracle grid used for n electrons: the override if present, otherwise the
/// system grid for n <= 2, 128 points on the same box for n = 3, and 40
/// points on [-6, 6] for n = 4.
Grid1D oracle_grid_for(int n_electrons, const SystemConfig& base, const SeriesOptions& options);

/// Oracle symmetry matching the spin labels: symmetric for one electron per
/// spin, equal-spin antisymmetry otherwise.
Symmetry natural_symmetry(const std::vector<Spin>& spins);

/// Spin-polarized N = 1..max: scan of the ground-level alpha (others mean field).
SeriesReport spin_polarized_series(const SystemConfig& base, const SeriesOptions& options);
/// Shells 1..max: inner shells frozen at HF, outer-pair sigma scanned; the
/// entropy is 1 - N_up Tr(rho_up^2) with N_up = shells.
SeriesReport spin_compensated_series(const SystemConfig& base, const SeriesOptions& options);

}  // namespace tdqmc
