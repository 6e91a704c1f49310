#include "tdqmc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "tdqmc/entanglement.hpp"
#include "tdqmc/error.hpp"

namespace tdqmc {

void ScanSpec::validate() const {
  if (values.size() < 5) throw ConfigError("scan.values", "need at least 5 scan points");
  for (double v : values)
    if (!std::isfinite(v) || v < 0.0) throw ConfigError("scan.values", "values must be finite and non-negative");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (!(*hi > 0.0) || *hi < 4.0 * *lo)
    throw ConfigError("scan.values", "scan must span at least a factor of 4");
  if (fit_degree < 1) throw ConfigError("scan.fit_degree", "must be at least 1");
  if (values.size() <= static_cast<std::size_t>(fit_degree))
    throw ConfigError("scan.fit_degree", "needs fewer coefficients than scan points");
}

NonlocalityParams scan_params(int n, const ScanSpec& spec, double value) {
  if (n < 2) return NonlocalityParams::mean_field(n);
  const PairWidth w = spec.variable == ScanVariable::alpha ? PairWidth::from_alpha(value)
                                                            : PairWidth::from_sigma(value);
  NonlocalityParams p(n);
  if (spec.pairs == ScanPairs::ground) {
    for (int i = 1; i < n; ++i) p(0, i) = w;
  } else {
    p(n - 1, n - 2) = w;
    p(n - 2, n - 1) = w;
  }
  return p;
}

RunSummary summarize(const TDQMCState& state, const SystemConfig& config, const Engine& engine) {
  RunSummary s;
  s.energy = engine.energy(state);
  const Spin spin = config.spins.front();
  const DensityMatrix rho = rdm_identical(spin, state.guides, config.spins, &s.rdm_fallbacks);
  const IdenticalEntropy si = linear_entropy_identical(rho, config.count(spin));
  s.entropy_identical = si.value;
  s.entropy_identical_raw = si.raw;
  for (int i = 0; i < config.n_electrons; ++i)
    s.entropy_distinguishable.push_back(linear_entropy_distinguishable(rdm_distinguishable(i, state.guides)));
  s.source_std = config.n_electrons > 0 && config.n_walkers >= 2 ? ensemble_stds(state.ensemble)
                                                                  : std::vector<double>{};
  return s;
}

ScanResult alpha_scan(const SystemConfig& config, const HFState& hf, const ScanSpec& spec,
                      const EngineOptions& options) {
  spec.validate();
  const Engine engine(config, options);
  ScanResult r;
  r.spec = spec;
  std::vector<double> x, y, se;
  for (double v : spec.values) {
    const TDQMCState state = engine.prepare_ground_state(hf, scan_params(config.n_electrons, spec, v));
    RunSummary s = summarize(state, config, engine);
    s.value = v;
    x.push_back(v);
    y.push_back(s.energy.mean);
    se.push_back(s.energy.std_error);
    r.points.push_back(std::move(s));
  }
  r.fit = polyfit(x, y, spec.fit_degree);
  double sq = 0.0;
  for (std::size_t p = 0; p < x.size(); ++p) sq += std::pow(y[p] - polyval(r.fit, x[p]), 2);
  r.fit_rms = std::sqrt(sq / static_cast<double>(x.size()));
  std::vector<double> sorted = se;
  std::sort(sorted.begin(), sorted.end());
  r.median_se = sorted.size() % 2 ? sorted[sorted.size() / 2]
                                  : 0.5 * (sorted[sorted.size() / 2 - 1] + sorted[sorted.size() / 2]);

  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  const FitMinimum m = polynomial_minimum(r.fit, *lo, *hi);
  r.value_star = m.x;
  r.energy_star = m.y;
  r.boundary_minimum = m.at_boundary;
  const auto raw = std::min_element(y.begin(), y.end()) - y.begin();
  r.raw_min_value = x[static_cast<std::size_t>(raw)];
  r.raw_min_energy = y[static_cast<std::size_t>(raw)];

  if (spec.evaluate_optimum) {
    const auto same = std::find(x.begin(), x.end(), r.value_star);
    if (same != x.end()) {
      r.at_optimum = r.points[static_cast<std::size_t>(same - x.begin())];
    } else {
      const TDQMCState state =
          engine.prepare_ground_state(hf, scan_params(config.n_electrons, spec, r.value_star));
      RunSummary s = summarize(state, config, engine);
      s.value = r.value_star;
      r.at_optimum = std::move(s);
    }
  }
  return r;
}

ScanResult alpha_scan(const SystemConfig& config, const ScanSpec& spec, const EngineOptions& options,
                      const HFOptions& hf_options) {
  return alpha_scan(config, hf_solve(config, hf_options), spec, options);
}

Grid1D oracle_grid_for(int n, const SystemConfig& base, const SeriesOptions& options) {
  if (auto it = options.oracle_grids.find(n); it != options.oracle_grids.end()) return it->second;
  if (n <= 2) return base.grid;
  if (n == 3) return Grid1D(base.grid.half_width(), 128);
  if (n == 4) return Grid1D(6.0, 40);
  return base.grid;
}

Symmetry natural_symmetry(const std::vector<Spin>& spins) {
  const auto up = std::count(spins.begin(), spins.end(), Spin::up);
  const auto down = static_cast<std::ptrdiff_t>(spins.size()) - up;
  return up <= 1 && down <= 1 ? Symmetry::symmetric : Symmetry::antisymmetric;
}

namespace {

SystemConfig resized(const SystemConfig& base, const SystemConfig& shape) {
  SystemConfig c = base;
  c.n_electrons = shape.n_electrons;
  c.spins = shape.spins;
  c.validate();
  return c;
}

void fill_oracle(SeriesRow& row, const SystemConfig& config, const SeriesOptions& options) {
  if (!options.run_oracle || config.n_electrons > options.oracle_max_electrons) return;
  OracleOptions o = options.oracle;
  o.grid = oracle_grid_for(config.n_electrons, config, options);
  try {
    const OracleResult exact = exact_ground_state(config, natural_symmetry(config.spins), o);
    row.e_oracle = exact.energy;
    const DensityMatrix rho = exact_one_body_rdm(exact.psi, 0);
    row.entropy_oracle = linear_entropy_identical(rho, config.count(config.spins.front())).raw;
  } catch (const CapacityError& e) {
    std::cerr << "warning: oracle skipped for N=" << config.n_electrons << ": " << e.what() << '\n';
  }
}

void fill_from_run(SeriesRow& row, const RunSummary& s) {
  row.e_tdqmc = s.energy.mean;
  row.se_tdqmc = s.energy.std_error;
  row.entropy_identical = s.entropy_identical;
  row.entropy_identical_raw = s.entropy_identical_raw;
  row.entropy_distinguishable = s.entropy_distinguishable;
}

}  // namespace

SeriesReport spin_polarized_series(const SystemConfig& base, const SeriesOptions& options) {
  SeriesReport report;
  report.kind = SeriesKind::polarized;
  ScanSpec spec = options.scan;
  spec.pairs = ScanPairs::ground;
  spec.variable = ScanVariable::alpha;
  spec.evaluate_optimum = true;
  for (int n = 1; n <= options.max_size; ++n) {
    const SystemConfig config = resized(base, SystemConfig::spin_polarized(n));
    SeriesRow row;
    row.size = n;
    row.n_electrons = n;
    const HFState hf = hf_solve(config, options.hf);
    row.e_hf = hf.energy_report.total;
    if (n == 1) {
      // no partner electrons: alpha has nothing to act on and is reported as 0
      const Engine engine(config, options.engine);
      fill_from_run(row, summarize(engine.prepare_ground_state(hf, NonlocalityParams::mean_field(1)), config, engine));
      row.alpha_star = 0.0;
      row.sigma_star = 0.0;
    } else {
      ScanResult scan = alpha_scan(config, hf, spec, options.engine);
      fill_from_run(row, *scan.at_optimum);
      row.alpha_star = scan.value_star;
      row.sigma_star = sigma_from_alpha(scan.value_star, scan.at_optimum->source_std.front());
      row.boundary_minimum = scan.boundary_minimum;
      row.scan = std::move(scan);
    }
    fill_oracle(row, config, options);
    report.rows.push_back(std::move(row));
  }
  return report;
}

SeriesReport spin_compensated_series(const SystemConfig& base, const SeriesOptions& options) {
  SeriesReport report;
  report.kind = SeriesKind::compensated;
  ScanSpec spec = options.scan;
  spec.pairs = ScanPairs::outer;
  spec.variable = ScanVariable::sigma;
  spec.evaluate_optimum = true;
  for (int shells = 1; shells <= options.max_size; ++shells) {
    const SystemConfig config = resized(base, SystemConfig::spin_compensated(shells));
    const int n = config.n_electrons;
    SeriesRow row;
    row.size = shells;
    row.n_electrons = n;
    const HFState hf = hf_solve(config, options.hf);
    row.e_hf = hf.energy_report.total;

    EngineOptions eo = options.engine;
    eo.frozen.assign(static_cast<std::size_t>(n), false);
    for (int i = 0; i < n - 2; ++i) eo.frozen[static_cast<std::size_t>(i)] = true;
    ScanResult scan = alpha_scan(config, hf, spec, eo);
    fill_from_run(row, *scan.at_optimum);
    row.sigma_star = scan.value_star;
    row.alpha_star = scan.value_star / scan.at_optimum->source_std[static_cast<std::size_t>(n - 2)];
    row.boundary_minimum = scan.boundary_minimum;

    if (options.check_unfrozen && shells >= 2) {
      EngineOptions all = options.engine;
      all.frozen.clear();
      const Engine engine(config, all);
      const TDQMCState state = engine.prepare_ground_state(hf, scan_params(n, spec, scan.value_star));
      row.e_unfrozen = engine.energy(state).mean;
    }
    row.scan = std::move(scan);
    fill_oracle(row, config, options);
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace tdqmc
