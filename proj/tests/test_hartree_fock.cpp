#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "support.hpp"
#include "tdqmc/error.hpp"
#include "tdqmc/hartree_fock.hpp"
#include "tdqmc/numerics.hpp"

using namespace tdqmc;
using tdqmc::testing::ho;
using tdqmc::testing::sampled;

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

SystemConfig pair_config(Spin second) {
  SystemConfig c = SystemConfig::spin_polarized(2);
  c.spins = {Spin::up, second};
  return c;
}

}  // namespace

TEST(HartreePotential, SingleElectronIsZero) {
  const SystemConfig c = SystemConfig::spin_polarized(1);
  const Eigen::VectorXd v = hartree_potential(0, {sampled(c.grid, 0)}, c);
  EXPECT_EQ(v.cwiseAbs().maxCoeff(), 0.0);
}

TEST(HartreePotential, DeltaLikePartnerSifts) {
  SystemConfig c = pair_config(Spin::down);
  c.grid = Grid1D(8.0, 257);  // node 128 sits at x = 0
  Orbital delta(c.grid);
  delta.values(128) = 1.0 / std::sqrt(c.grid.dx());
  const Eigen::VectorXd v = hartree_potential(0, {sampled(c.grid, 0), delta}, c);
  for (std::size_t g = 0; g < c.grid.size(); ++g)
    EXPECT_NEAR(v(static_cast<Eigen::Index>(g)), 1.0 / std::sqrt(c.grid.x(g) * c.grid.x(g) + 1.0), 1e-13);
}

TEST(HartreePotential, MatchesQuadrature) {
  const SystemConfig c = pair_config(Spin::down);
  const Eigen::VectorXd v = hartree_potential(0, {sampled(c.grid, 0), sampled(c.grid, 0)}, c);
  for (std::size_t g = 0; g < c.grid.size(); g += 7) {
    const double x = c.grid.x(g);
    const double ref = GK::integrate([x](double y) { return ho(0, y) * ho(0, y) / std::sqrt((x - y) * (x - y) + 1.0); },
                                     -8.0, 8.0, 15, 1e-13);
    EXPECT_NEAR(v(static_cast<Eigen::Index>(g)), ref, 1e-6) << "x=" << x;
  }
}

TEST(ExchangeApply, OppositeSpinsGiveZero) {
  const SystemConfig c = pair_config(Spin::down);
  const Orbital x = exchange_apply(1, {sampled(c.grid, 0), sampled(c.grid, 1)}, c);
  EXPECT_EQ(x.values.cwiseAbs().maxCoeff(), 0.0);
}

TEST(ExchangeApply, IdenticalOrbitalsCancelHartree) {
  const SystemConfig c = pair_config(Spin::up);
  const Orbital phi = sampled(c.grid, 0);
  const std::vector<Orbital> orbitals{phi, phi};
  const Orbital x = exchange_apply(0, orbitals, c);
  const Eigen::VectorXd vh = hartree_potential(0, orbitals, c);
  const Eigen::VectorXcd expected = -(vh.cast<Complex>().array() * phi.values.array()).matrix();
  EXPECT_LE((x.values - expected).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(ExchangeApply, ExpectationMatchesDoubleIntegral) {
  const SystemConfig c = pair_config(Spin::up);
  const Orbital x = exchange_apply(1, {sampled(c.grid, 0), sampled(c.grid, 1)}, c);
  const double k = GK::integrate(
      [](double a) {
        return GK::integrate([a](double b) { return ho(0, a) * ho(1, a) * ho(1, b) * ho(0, b) / std::sqrt((a - b) * (a - b) + 1.0); },
                             -8.0, 8.0, 10, 1e-12);
      },
      -8.0, 8.0, 10, 1e-12);
  EXPECT_NEAR(inner_product(sampled(c.grid, 1), x).real(), -k, 1e-6);
}

TEST(HFEnergy, HarmonicGroundStateVirial) {
  const SystemConfig c = SystemConfig::spin_polarized(1);
  const HFEnergyReport r = hf_energy({sampled(c.grid, 0)}, c);
  EXPECT_NEAR(r.kinetic, 0.25, 1e-6);
  EXPECT_NEAR(r.external, 0.25, 1e-6);
  EXPECT_EQ(r.hartree, 0.0);
  EXPECT_EQ(r.exchange, 0.0);
}

TEST(HFEnergy, OppositeSpinsHaveNoExchange) {
  const SystemConfig c = pair_config(Spin::down);
  EXPECT_EQ(hf_energy({sampled(c.grid, 0), sampled(c.grid, 1)}, c).exchange, 0.0);
}

TEST(HFEnergy, SameSpinMatchesDoubleIntegrals) {
  const SystemConfig c = pair_config(Spin::up);
  const HFEnergyReport r = hf_energy({sampled(c.grid, 0), sampled(c.grid, 1)}, c);
  auto integral = [](auto&& f) {
    return GK::integrate([&f](double a) { return GK::integrate([&f, a](double b) { return f(a, b); }, -8.0, 8.0, 10, 1e-12); },
                         -8.0, 8.0, 10, 1e-12);
  };
  const double j = integral([](double a, double b) {
    return ho(0, a) * ho(0, a) * ho(1, b) * ho(1, b) / std::sqrt((a - b) * (a - b) + 1.0);
  });
  const double k = integral([](double a, double b) {
    return ho(0, a) * ho(1, a) * ho(1, b) * ho(0, b) / std::sqrt((a - b) * (a - b) + 1.0);
  });
  EXPECT_NEAR(r.hartree, j, 1e-6);
  EXPECT_NEAR(r.exchange, -k, 1e-6);
  EXPECT_NEAR(r.total, r.kinetic + r.external + r.hartree + r.exchange, 1e-14);
}

TEST(HFEnergy, IdenticalSameSpinOrbitalsAreSelfInteractionFree) {
  const SystemConfig c = pair_config(Spin::up);
  const HFEnergyReport r = hf_energy({sampled(c.grid, 0), sampled(c.grid, 0)}, c);
  EXPECT_NEAR(r.hartree + r.exchange, 0.0, 1e-12);
}

TEST(HFSolve, SingleElectron) {
  const SystemConfig c = SystemConfig::spin_polarized(1);
  const HFState s = hf_solve(c);
  EXPECT_NEAR(s.energy_report.total, 0.5, 5e-4);
  const double sign = s.orbitals[0].values(128).real() > 0 ? 1.0 : -1.0;
  for (std::size_t g = 0; g < c.grid.size(); ++g)
    EXPECT_NEAR(sign * s.orbitals[0](g).real(), ho(0, c.grid.x(g)), 1e-3);
}

TEST(HFSolve, NoninteractingFourLevels) {
  SystemConfig c = SystemConfig::spin_polarized(4);
  c.coupling = 0.0;
  EXPECT_NEAR(hf_solve(c).energy_report.total, 8.0, 2e-3);
}

TEST(HFSolve, OrthonormalAndSigned) {
  const SystemConfig c = SystemConfig::spin_polarized(3);
  const HFState s = hf_solve(c);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      EXPECT_NEAR(std::abs(inner_product(s.orbitals[i], s.orbitals[j]) - Complex(i == j)), 0.0, 1e-8);
  EXPECT_GE(s.energy_report.hartree, 0.0);
  EXPECT_LE(s.energy_report.exchange, 0.0);
}

TEST(HFSolve, CompensatedPairAgreesWithRichardsonExtrapolation) {
  auto run = [](std::size_t points) {
    SystemConfig c = SystemConfig::spin_compensated(1);
    c.grid = Grid1D(8.0, points);
    return hf_solve(c).energy_report.total;
  };
  const double coarse = run(128), fine = run(256);
  const double extrapolated = fine + (fine - coarse) / 15.0;  // fourth-order stencil
  EXPECT_NEAR(coarse, extrapolated, 5e-4 * extrapolated);
  EXPECT_NEAR(fine, extrapolated, 5e-4 * extrapolated);
}

TEST(HFSolve, RefinementInvariance) {
  SystemConfig base = SystemConfig::spin_polarized(2);
  base.grid = Grid1D(8.0, 128);
  const double e1 = hf_solve(base, HFOptions{0.02}).energy_report.total;
  base.grid = Grid1D(8.0, 256);
  const double e2 = hf_solve(base, HFOptions{0.01}).energy_report.total;
  EXPECT_NEAR(e1, e2, 2e-4);
}

TEST(HFSolve, ExhaustedBudgetThrowsWithTrace) {
  const SystemConfig c = SystemConfig::spin_polarized(2);
  try {
    hf_solve(c, HFOptions{0.02, 5, 1e-9});
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_FALSE(e.energy_trace().empty());
  }
}
