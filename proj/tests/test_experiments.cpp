#include <cmath>

#include <gtest/gtest.h>

#include "tdqmc/error.hpp"
#include "tdqmc/experiments.hpp"

using namespace tdqmc;

namespace {

SystemConfig desk(SystemConfig c, std::size_t walkers, int steps) {
  c.n_walkers = walkers;
  c.n_steps = steps;
  return c;
}

ScanSpec spec_of(ScanPairs pairs, ScanVariable variable, std::vector<double> values) {
  ScanSpec s;
  s.pairs = pairs;
  s.variable = variable;
  s.values = std::move(values);
  return s;
}

}  // namespace

TEST(Polyfit, RecoversQuartic) {
  std::vector<double> x, y;
  for (int i = 0; i < 9; ++i) {
    const double t = -1.0 + 0.3 * i;
    x.push_back(t);
    y.push_back(1.0 - 2.0 * t + 0.5 * t * t + 0.25 * t * t * t * t);
  }
  const Eigen::VectorXd c = polyfit(x, y, 4);
  const Eigen::VectorXd expected = (Eigen::VectorXd(5) << 1.0, -2.0, 0.5, 0.0, 0.25).finished();
  EXPECT_LE((c - expected).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(polyval(c, 0.7), 1.0 - 1.4 + 0.245 + 0.25 * 0.2401, 1e-12);
}

TEST(PolynomialMinimum, InteriorAndBoundary) {
  const Eigen::VectorXd parabola = (Eigen::VectorXd(3) << 2.0, -2.6, 1.0).finished();  // min at 1.3
  const FitMinimum inside = polynomial_minimum(parabola, 0.0, 3.0);
  EXPECT_NEAR(inside.x, 1.3, 1e-8);
  EXPECT_NEAR(inside.y, 2.0 - 1.69, 1e-12);
  EXPECT_FALSE(inside.at_boundary);
  const FitMinimum edge = polynomial_minimum(parabola, 2.0, 3.0);
  EXPECT_DOUBLE_EQ(edge.x, 2.0);
  EXPECT_TRUE(edge.at_boundary);
}

TEST(ScanSpec, Validation) {
  auto spec = spec_of(ScanPairs::outer, ScanVariable::sigma, {0.2, 0.4, 0.6, 0.8, 1.0});
  EXPECT_NO_THROW(spec.validate());
  spec.values = {0.2, 0.4, 0.6, 0.8};
  EXPECT_THROW(spec.validate(), ConfigError);
  spec.values = {0.5, 0.6, 0.7, 0.8, 1.9};  // spans less than a factor of 4
  EXPECT_THROW(spec.validate(), ConfigError);
  spec.values = {-0.1, 0.4, 0.6, 0.8, 1.0};
  EXPECT_THROW(spec.validate(), ConfigError);
  spec.values = {0.1, 0.4, std::nan(""), 0.8, 1.0};
  EXPECT_THROW(spec.validate(), ConfigError);
  spec.values = {0.2, 0.4, 0.6, 0.8, 1.0};
  spec.fit_degree = 5;
  EXPECT_THROW(spec.validate(), ConfigError);
  spec.values.clear();
  EXPECT_THROW(spec.validate(), ConfigError);
}

TEST(ScanParams, PairMasks) {
  const auto ground = scan_params(3, spec_of(ScanPairs::ground, ScanVariable::alpha, {}), 0.6);
  EXPECT_EQ(ground, NonlocalityParams::ground_level(3, 0.6));
  const auto outer = scan_params(4, spec_of(ScanPairs::outer, ScanVariable::sigma, {}), 0.9);
  EXPECT_EQ(outer, NonlocalityParams::outer_pair(4, 0.9));
  const auto outer_alpha = scan_params(2, spec_of(ScanPairs::outer, ScanVariable::alpha, {}), 0.9);
  EXPECT_EQ(outer_alpha(0, 1), PairWidth::from_alpha(0.9));
  EXPECT_EQ(outer_alpha(1, 0), PairWidth::from_alpha(0.9));
  EXPECT_EQ(scan_params(1, spec_of(ScanPairs::ground, ScanVariable::alpha, {}), 0.6), NonlocalityParams::mean_field(1));
}

TEST(Series, Helpers) {
  EXPECT_EQ(natural_symmetry({Spin::up}), Symmetry::symmetric);
  EXPECT_EQ(natural_symmetry({Spin::up, Spin::down}), Symmetry::symmetric);
  EXPECT_EQ(natural_symmetry({Spin::up, Spin::up}), Symmetry::antisymmetric);
  EXPECT_EQ(natural_symmetry({Spin::up, Spin::down, Spin::up, Spin::down}), Symmetry::antisymmetric);

  const SystemConfig base;
  SeriesOptions o;
  EXPECT_EQ(oracle_grid_for(2, base, o), base.grid);
  EXPECT_EQ(oracle_grid_for(3, base, o), Grid1D(8.0, 128));
  EXPECT_EQ(oracle_grid_for(4, base, o), Grid1D(6.0, 40));
  o.oracle_grids.emplace(3, Grid1D(7.0, 100));
  EXPECT_EQ(oracle_grid_for(3, base, o), Grid1D(7.0, 100));
}

TEST(AlphaScan, SingleElectronIsFlat) {
  const SystemConfig c = desk(SystemConfig::spin_polarized(1), 1000, 60);
  ScanSpec spec = spec_of(ScanPairs::ground, ScanVariable::alpha, {0.1, 0.3, 0.5, 0.8, 1.2});
  spec.evaluate_optimum = false;
  const ScanResult r = alpha_scan(c, spec, EngineOptions{});
  ASSERT_EQ(r.points.size(), 5u);
  for (const RunSummary& p : r.points) {
    EXPECT_NEAR(p.energy.mean, 0.5, 1e-3);
    EXPECT_EQ(p.energy.mean, r.points.front().energy.mean);  // no partner, identical runs
  }
}

TEST(AlphaScan, SmokeAndReproducible) {
  const SystemConfig c = desk(SystemConfig::spin_compensated(1), 300, 25);
  const ScanSpec spec = spec_of(ScanPairs::outer, ScanVariable::sigma, {0.2, 0.5, 0.8, 1.2, 1.6});
  const ScanResult a = alpha_scan(c, spec, EngineOptions{});
  const ScanResult b = alpha_scan(c, spec, EngineOptions{});
  ASSERT_EQ(a.points.size(), 5u);
  EXPECT_EQ(a.fit.size(), 5);
  for (std::size_t p = 0; p < 5; ++p) {
    EXPECT_EQ(a.points[p].value, spec.values[p]);
    EXPECT_EQ(a.points[p].energy.mean, b.points[p].energy.mean);
    EXPECT_GE(a.points[p].energy.std_error, 0.0);
  }
  EXPECT_GE(a.value_star, 0.2);
  EXPECT_LE(a.value_star, 1.6);
  EXPECT_EQ(a.boundary_minimum, a.value_star == 0.2 || a.value_star == 1.6);
  ASSERT_TRUE(a.at_optimum.has_value());
  EXPECT_EQ(a.at_optimum->value, a.value_star);
  EXPECT_EQ(a.value_star, b.value_star);
}

TEST(Series, PolarizedSmoke) {
  const SystemConfig base = desk(SystemConfig::spin_polarized(1), 300, 20);
  SeriesOptions o;
  o.max_size = 2;
  o.scan.values = {0.2, 0.5, 0.8, 1.2, 1.6};
  o.oracle_grids.emplace(2, Grid1D(8.0, 64));
  const SeriesReport r = spin_polarized_series(base, o);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[0].size, 1);
  EXPECT_EQ(r.rows[0].alpha_star, 0.0);
  EXPECT_NEAR(r.rows[0].e_tdqmc, 0.5, 1e-3);
  EXPECT_NEAR(r.rows[0].entropy_identical, 0.0, 1e-6);
  EXPECT_NEAR(r.rows[0].e_oracle, 0.5, 1e-3);
  EXPECT_EQ(r.rows[1].n_electrons, 2);
  EXPECT_TRUE(r.rows[1].scan.has_value());
  EXPECT_FALSE(std::isnan(r.rows[1].e_oracle));
  EXPECT_GT(r.rows[1].entropy_oracle, 0.0);
  EXPECT_EQ(r.rows[1].entropy_distinguishable.size(), 2u);
  EXPECT_NEAR(r.rows[1].sigma_star, r.rows[1].alpha_star * r.rows[1].scan->at_optimum->source_std[0], 1e-12);
}

TEST(Series, CompensatedSmoke) {
  const SystemConfig base = desk(SystemConfig::spin_compensated(1), 300, 20);
  SeriesOptions o;
  o.max_size = 1;
  o.scan.values = {0.2, 0.5, 0.8, 1.2, 1.6};
  o.oracle_grids.emplace(2, Grid1D(8.0, 64));
  const SeriesReport r = spin_compensated_series(base, o);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0].n_electrons, 2);
  EXPECT_FALSE(std::isnan(r.rows[0].e_hf));
  EXPECT_FALSE(std::isnan(r.rows[0].sigma_star));
  EXPECT_GT(r.rows[0].entropy_oracle, 0.0);
}
