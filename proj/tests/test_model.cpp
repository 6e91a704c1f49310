#include <cmath>

#include <gtest/gtest.h>

#include "tdqmc/error.hpp"
#include "tdqmc/model.hpp"

using namespace tdqmc;

TEST(Confinement, Examples) {
  EXPECT_DOUBLE_EQ(v_en(0.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(v_en(1.0, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(v_en(0.5, 2.0), 0.5);
  EXPECT_DOUBLE_EQ(v_en(-1.3, 1.7), v_en(1.3, 1.7));
}

TEST(SoftCoulomb, Examples) {
  EXPECT_DOUBLE_EQ(v_ee(0.0, 0.0, 1.0), 1.0);
  EXPECT_NEAR(v_ee(std::sqrt(3.0), 0.0, 1.0), 0.5, 1e-15);
  EXPECT_NEAR(v_ee(100.0, 0.0, 1.0), 0.00999950003749688, 1e-15);
}

TEST(SoftCoulomb, SymmetricAndDecreasing) {
  for (double r = 0.0; r < 10.0; r += 0.25) {
    EXPECT_DOUBLE_EQ(v_ee(0.3, 0.3 + r, 1.0), v_ee(0.3 + r, 0.3, 1.0));
    EXPECT_GT(v_ee(0.0, r, 1.0), v_ee(0.0, r + 0.25, 1.0));
  }
}

TEST(SigmaFromAlpha, Examples) {
  EXPECT_DOUBLE_EQ(sigma_from_alpha(0.0, 3.0), 0.0);
  EXPECT_TRUE(std::isinf(sigma_from_alpha(kInfinity, 0.7)));
  EXPECT_NEAR(sigma_from_alpha(1.2, 0.7), 0.84, 1e-15);
  EXPECT_DOUBLE_EQ(sigma_from_alpha(1.2, 1.4), 2.0 * sigma_from_alpha(1.2, 0.7));
}

TEST(PairWidth, LimitsAreFlags) {
  EXPECT_EQ(PairWidth::from_alpha(kInfinity).kind, PairWidth::Kind::mean_field);
  EXPECT_EQ(PairWidth::from_alpha(0.0).kind, PairWidth::Kind::local);
  EXPECT_EQ(PairWidth::from_sigma(0.0).kind, PairWidth::Kind::local);
  EXPECT_DOUBLE_EQ(PairWidth::from_alpha(0.5).sigma(0.8), 0.4);
  EXPECT_DOUBLE_EQ(PairWidth::from_sigma(0.5).sigma(0.8), 0.5);
  EXPECT_THROW(PairWidth::from_alpha(-1.0), ConfigError);
}

TEST(NonlocalityParams, Presets) {
  const auto g = NonlocalityParams::ground_level(3, 0.7);
  EXPECT_EQ(g(0, 1), PairWidth::from_alpha(0.7));
  EXPECT_EQ(g(0, 2), PairWidth::from_alpha(0.7));
  EXPECT_EQ(g(1, 0).kind, PairWidth::Kind::mean_field);
  const auto o = NonlocalityParams::outer_pair(4, 0.4);
  EXPECT_EQ(o(3, 2), PairWidth::from_sigma(0.4));
  EXPECT_EQ(o(2, 3), PairWidth::from_sigma(0.4));
  EXPECT_EQ(o(0, 1).kind, PairWidth::Kind::mean_field);
}

TEST(SystemConfig, Presets) {
  const auto p = SystemConfig::spin_polarized(3);
  EXPECT_EQ(p.count(Spin::up), 3);
  const auto c = SystemConfig::spin_compensated(2);
  EXPECT_EQ(c.n_electrons, 4);
  EXPECT_EQ(c.spins, (std::vector<Spin>{Spin::up, Spin::down, Spin::up, Spin::down}));
  EXPECT_EQ(level_assignment(c.spins), (std::vector<int>{0, 0, 1, 1}));
}

TEST(SystemConfig, ValidationNamesField) {
  SystemConfig c = SystemConfig::spin_polarized(2);
  c.spins.pop_back();
  try {
    c.validate();
    FAIL() << "expected a config error";
  } catch (const ConfigError& e) {
    EXPECT_NE(e.field().find("spins"), std::string::npos);
  }
  c = SystemConfig::spin_polarized(2);
  c.n_walkers = 50;
  EXPECT_THROW(c.validate(), ConfigError);
  c = SystemConfig::spin_polarized(2);
  c.omega = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = SystemConfig::spin_polarized(2);
  c.softening = -1.0;
  EXPECT_THROW(c.validate(), ConfigError);
}
