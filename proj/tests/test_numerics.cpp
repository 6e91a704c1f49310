#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include "support.hpp"
#include "tdqmc/error.hpp"
#include "tdqmc/model.hpp"
#include "tdqmc/numerics.hpp"
#include "tdqmc/random.hpp"

using namespace tdqmc;
using tdqmc::testing::ho;

namespace {

double max_interior_error(const Grid1D& grid, const Eigen::VectorXcd& got,
                          double (*exact)(double), double limit) {
  double worst = 0.0;
  for (std::size_t g = 2; g + 2 < grid.size(); ++g)
    if (std::abs(grid.x(g)) <= limit) worst = std::max(worst, std::abs(got(static_cast<Eigen::Index>(g)) - exact(grid.x(g))));
  return worst;
}

}  // namespace

TEST(Grid, RejectsTooFewPoints) { EXPECT_THROW(Grid1D(8.0, 7), ConfigError); }

TEST(Grid, SpacingAndSymmetry) {
  const Grid1D grid(8.0, 256);
  EXPECT_DOUBLE_EQ(grid.dx(), 16.0 / 255.0);
  EXPECT_DOUBLE_EQ(grid.x_min(), -grid.x_max());
  for (std::size_t g = 0; g < grid.size(); ++g) EXPECT_NEAR(grid.x(g), -grid.x(grid.size() - 1 - g), 1e-13);
}

TEST(Laplacian, ConstantVanishesInInterior) {
  const Grid1D grid(4.0, 64);
  const Orbital c = Orbital::from_function(grid, [](double) { return 3.0; });
  const Orbital lap = laplacian(c);
  for (std::size_t g = 2; g + 2 < grid.size(); ++g) EXPECT_NEAR(std::abs(lap(g)), 0.0, 1e-9);
}

TEST(Laplacian, QuadraticGivesTwo) {
  const Grid1D grid(4.0, 64);
  const Orbital q = Orbital::from_function(grid, [](double x) { return x * x; });
  const Orbital lap = laplacian(q);
  for (std::size_t g = 2; g + 2 < grid.size(); ++g) EXPECT_NEAR(lap(g).real(), 2.0, 1e-9);
}

TEST(Laplacian, GaussianRefinementOrder) {
  auto exact = [](double x) { return (x * x - 1.0) * std::exp(-0.5 * x * x); };
  double errors[2];
  int idx = 0;
  for (std::size_t n : {101u, 201u}) {
    const Grid1D grid(8.0, n);
    const Orbital f = Orbital::from_function(grid, [](double x) { return std::exp(-0.5 * x * x); });
    errors[idx++] = max_interior_error(grid, laplacian(f).values, +exact, 6.0);
  }
  const double order = std::log2(errors[0] / errors[1]);
  EXPECT_GE(order, 1.9);
}

TEST(InnerProduct, NormalizedOrbitalHasUnitNorm) {
  const Grid1D grid(8.0, 256);
  const Orbital phi = normalized(tdqmc::testing::sampled(grid, 2));
  EXPECT_NEAR(inner_product(phi, phi).real(), 1.0, 1e-12);
}

TEST(InnerProduct, OppositeParityStatesAreOrthogonal) {
  const Grid1D grid(8.0, 256);
  EXPECT_LE(std::abs(inner_product(harmonic_eigenfunction(grid, 0, 1.0), harmonic_eigenfunction(grid, 1, 1.0))), 1e-10);
}

TEST(InnerProduct, ShiftedGroundStateMatchesQuadrature) {
  const Grid1D grid(8.0, 256);
  const double dx = grid.dx();
  const Orbital a = Orbital::from_function(grid, [](double x) { return ho(0, x); });
  const Orbital b = Orbital::from_function(grid, [dx](double x) { return ho(0, x - dx); });
  const double reference = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [dx](double x) { return ho(0, x) * ho(0, x - dx); }, -8.0, 8.0, 15, 1e-14);
  EXPECT_NEAR(inner_product(a, b).real(), reference, 1e-8);
}

TEST(InnerProduct, ConjugateSymmetric) {
  const Grid1D grid(8.0, 64);
  const Orbital a = Orbital::from_function(grid, [](double x) { return std::polar(std::exp(-x * x), 0.3 * x); });
  const Orbital b = Orbital::from_function(grid, [](double x) { return std::polar(std::exp(-0.5 * x * x), -x); });
  const Complex ab = inner_product(a, b), ba = inner_product(b, a);
  EXPECT_NEAR(std::abs(ab - std::conj(ba)), 0.0, 1e-15);
}

TEST(InnerProduct, GridMismatchThrows) {
  EXPECT_THROW(inner_product(Orbital(Grid1D(8.0, 64)), Orbital(Grid1D(8.0, 65))), GridMismatchError);
}

TEST(GramSchmidt, OrthonormalPairUnchanged) {
  const Grid1D grid(8.0, 256);
  const std::vector<Orbital> in{normalized(harmonic_eigenfunction(grid, 0, 1.0)),
                                normalized(harmonic_eigenfunction(grid, 1, 1.0))};
  const auto out = gram_schmidt(in);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_LE((out[i].values - in[i].values).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(GramSchmidt, RecoversSecondState) {
  const Grid1D grid(8.0, 256);
  const Orbital p0 = normalized(harmonic_eigenfunction(grid, 0, 1.0));
  const Orbital p1 = normalized(harmonic_eigenfunction(grid, 1, 1.0));
  const auto out = gram_schmidt({p0, Orbital(grid, p0.values + 0.5 * p1.values)});
  EXPECT_LE((out[0].values - p0.values).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(std::abs(inner_product(out[1], p1)), 1.0, 1e-10);
}

TEST(GramSchmidt, RandomSmoothVectorsBecomeOrthonormal) {
  const Grid1D grid(8.0, 128);
  std::vector<Orbital> in;
  for (int s = 0; s < 3; ++s)
    in.push_back(Orbital::from_function(grid, [s](double x) {
      return Complex(std::exp(-0.3 * (x - s) * (x - s)) * std::cos(0.7 * s * x + 0.2),
                     0.1 * s * std::exp(-0.5 * x * x) * std::sin(x));
    }));
  const auto out = gram_schmidt(in);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      EXPECT_NEAR(std::abs(inner_product(out[i], out[j]) - Complex(i == j ? 1.0 : 0.0)), 0.0, 1e-10);
  const auto twice = gram_schmidt(out);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_LE((twice[i].values - out[i].values).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(GramSchmidt, DependentSetThrows) {
  const Grid1D grid(8.0, 64);
  const Orbital p0 = harmonic_eigenfunction(grid, 0, 1.0);
  EXPECT_THROW(gram_schmidt({p0, Orbital(grid, 2.0 * p0.values)}), DegeneracyError);
}

TEST(ImagTimeStep, EigenstateIsFixedPoint) {
  const Grid1D grid(8.0, 256);
  const Eigen::VectorXd v = confinement_potential(grid, 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tdqmc::testing::dense_hamiltonian(grid, v));
  Orbital phi = normalized(Orbital(grid, es.eigenvectors().col(0).cast<Complex>()));
  const Orbital next = normalized(imag_time_step(phi, v, 1e-3));
  EXPECT_LE((next.values - phi.values).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(ImagTimeStep, ZeroStepIsIdentity) {
  const Grid1D grid(8.0, 64);
  const Orbital phi = harmonic_eigenfunction(grid, 3, 1.0);
  EXPECT_EQ(imag_time_step(phi, confinement_potential(grid, 1.0), 0.0).values, phi.values);
}

TEST(ImagTimeStep, NonFinitePotentialThrows) {
  const Grid1D grid(8.0, 64);
  Eigen::VectorXd v = confinement_potential(grid, 1.0);
  v(10) = std::nan("");
  EXPECT_THROW(imag_time_step(harmonic_eigenfunction(grid, 0, 1.0), v, 0.01), NumericalError);
}

TEST(ImagTimeStep, RelaxesRandomStartToHarmonicGround) {
  const Grid1D grid(8.0, 256);
  const Eigen::VectorXd v = confinement_potential(grid, 1.0);
  RandomStream rng(7, 0);
  Orbital phi(grid);
  for (std::size_t g = 1; g + 1 < grid.size(); ++g) phi.values(static_cast<Eigen::Index>(g)) = rng.uniform();
  phi = normalized(phi);
  for (int s = 0; s < 2000; ++s) phi = normalized(imag_time_step(phi, v, 0.01));
  EXPECT_NEAR(energy_expectation(phi, v), 0.5, 5e-4);
}

TEST(ImagTimeStep, NormDecaysForNonNegativePotential) {
  const Grid1D grid(8.0, 128);
  const Eigen::VectorXd v = confinement_potential(grid, 1.0);
  Orbital phi = Orbital::from_function(grid, [](double x) { return std::exp(-0.2 * (x - 1) * (x - 1)); });
  for (int s = 0; s < 20; ++s) {
    const Orbital next = imag_time_step(phi, v, 0.05);
    EXPECT_LE(norm(next), norm(phi) + 1e-10);
    phi = next;
  }
}

TEST(ImagTimeStep, SecondOrderInTime) {
  // Propagate to tau = 0.5 and compare against the spectral propagator of the
  // same discrete Hamiltonian.
  const Grid1D grid(6.0, 96);
  const Eigen::VectorXd v = confinement_potential(grid, 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tdqmc::testing::dense_hamiltonian(grid, v));
  const Orbital start = Orbital::from_function(grid, [](double x) { return std::exp(-0.3 * (x - 1.0) * (x - 1.0)); });
  const double tau = 0.5;
  const Eigen::VectorXd coeff = es.eigenvectors().transpose() * start.values.real();
  const Eigen::VectorXd exact =
      es.eigenvectors() * (coeff.array() * (-tau * es.eigenvalues().array()).exp()).matrix();
  double err[2];
  int idx = 0;
  for (int steps : {20, 40}) {
    Orbital phi = start;
    for (int s = 0; s < steps; ++s) phi = imag_time_step(phi, v, tau / steps);
    err[idx++] = (phi.values.real() - exact).cwiseAbs().maxCoeff();
  }
  EXPECT_GE(std::log2(err[0] / err[1]), 1.9);
}

TEST(SamplePositions, DeltaLikeDensityStaysInSupport) {
  const Grid1D grid(8.0, 64);
  Eigen::VectorXd d = Eigen::VectorXd::Zero(64);
  d(30) = 1.0;
  RandomStream rng(1, 0);
  for (double x : sample_positions(grid, d, 2000, rng)) {
    EXPECT_GE(x, grid.x(29));
    EXPECT_LE(x, grid.x(31));
  }
}

TEST(SamplePositions, ZeroDensityThrows) {
  const Grid1D grid(8.0, 64);
  RandomStream rng(1, 0);
  EXPECT_ANY_THROW(sample_positions(grid, Eigen::VectorXd::Zero(64), 10, rng));
}

TEST(SamplePositions, GaussianMomentsAndChiSquare) {
  const Grid1D grid(8.0, 256);
  const Orbital phi = harmonic_eigenfunction(grid, 0, 1.0);
  const Eigen::VectorXd density = phi.values.cwiseAbs2();
  RandomStream rng(2024, 3);
  const std::size_t m = 100000;
  const auto xs = sample_positions(grid, density, m, rng);
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / m;
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= m;
  const double pop_var = 0.5;
  EXPECT_LE(std::abs(mean), 4.0 * std::sqrt(pop_var / m));
  EXPECT_NEAR(var, pop_var, 0.05 * pop_var);

  // 32 equal-width bins on [-4, 4] plus two tails; expected counts from the
  // continuous density.
  const int bins = 32;
  std::vector<double> edges(bins + 1);
  for (int b = 0; b <= bins; ++b) edges[b] = -4.0 + 8.0 * b / bins;
  std::vector<double> observed(bins + 2, 0.0), expected(bins + 2, 0.0);
  for (double x : xs) {
    const auto it = std::upper_bound(edges.begin(), edges.end(), x);
    observed[static_cast<std::size_t>(it - edges.begin())] += 1.0;
  }
  auto cdf = [](double x) { return 0.5 * std::erfc(-x); };  // |phi0|^2 has variance 1/2
  expected[0] = cdf(edges[0]) * m;
  for (int b = 1; b <= bins; ++b) expected[b] = (cdf(edges[b]) - cdf(edges[b - 1])) * m;
  expected[bins + 1] = (1.0 - cdf(edges[bins])) * m;
  double chi2 = 0.0;
  int dof = -1;
  for (std::size_t b = 0; b < observed.size(); ++b) {
    if (expected[b] < 5.0) continue;
    chi2 += std::pow(observed[b] - expected[b], 2) / expected[b];
    ++dof;
  }
  EXPECT_GT(boost::math::gamma_q(0.5 * dof, 0.5 * chi2), 0.001);
}

TEST(SamplePositions, FixedSeedIsReproducible) {
  const Grid1D grid(8.0, 128);
  const Eigen::VectorXd density = harmonic_eigenfunction(grid, 1, 1.0).values.cwiseAbs2();
  RandomStream a(99, 5), b(99, 5);
  EXPECT_EQ(sample_positions(grid, density, 1000, a), sample_positions(grid, density, 1000, b));
}

TEST(RandomStream, SerializationRoundTrip) {
  RandomStream a(3, 4);
  for (int i = 0; i < 7; ++i) a.normal();
  RandomStream b = RandomStream::deserialize(a.serialize());
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.normal(), b.normal());
}

TEST(EnsembleStd, Examples) {
  const std::vector<double> pair{-1.0, 1.0};
  EXPECT_DOUBLE_EQ(ensemble_std(pair), 1.0);
  const std::vector<double> same(5, 2.5);
  EXPECT_DOUBLE_EQ(ensemble_std(same), 0.0);
  const std::vector<double> one{1.0};
  EXPECT_ANY_THROW(ensemble_std(one));
}

TEST(EnsembleStd, GroundStateWidth) {
  const Grid1D grid(8.0, 256);
  RandomStream rng(11, 0);
  const auto xs = sample_positions(grid, harmonic_eigenfunction(grid, 0, 1.0).values.cwiseAbs2(), 100000, rng);
  EXPECT_NEAR(ensemble_std(xs), 1.0 / std::sqrt(2.0), 0.02 / std::sqrt(2.0));
}
