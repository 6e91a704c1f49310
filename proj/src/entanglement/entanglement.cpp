#include "tdqmc/entanglement.hpp"

#include <cmath>
#include <iomanip>
#include <iostream>

#include <Eigen/Dense>

#include "tdqmc/error.hpp"
#include "tdqmc/numerics.hpp"

namespace tdqmc {

double quadrature_trace(const DensityMatrix& dm) {
  return dm.grid.weights().dot(dm.rho.diagonal().real());
}

DensityMatrix trace_normalized(DensityMatrix dm) {
  const double t = quadrature_trace(dm);
  if (!(t > 0.0)) throw NumericalError("density matrix has non-positive trace");
  dm.rho /= t;
  return dm;
}

double purity(const DensityMatrix& dm) {
  const Eigen::VectorXd w = dm.grid.weights();
  // Tr(rho^2) = sum_{g,h} w_g w_h rho(g,h) rho(h,g)
  const Eigen::MatrixXcd weighted = w.asDiagonal() * dm.rho * w.asDiagonal();
  return (weighted.array() * dm.rho.transpose().array()).sum().real();
}

DensityMatrixChecks check_density_matrix(const DensityMatrix& dm) {
  DensityMatrixChecks c{};
  c.hermiticity_error = (dm.rho - dm.rho.adjoint()).cwiseAbs().maxCoeff();
  c.trace_error = std::abs(quadrature_trace(dm) - 1.0);
  const Eigen::VectorXd s = dm.grid.weights().cwiseSqrt();
  const Eigen::MatrixXcd scaled = s.asDiagonal() * dm.rho * s.asDiagonal();
  const Eigen::MatrixXcd herm = 0.5 * (scaled + scaled.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
  c.min_eigenvalue = solver.eigenvalues().minCoeff();
  return c;
}

DensityMatrix rdm_distinguishable(int i, const GuideWaveSet& guides) {
  const Eigen::MatrixXcd& phi = guides.waves.at(static_cast<std::size_t>(i));
  if (phi.cols() == 0) throw NumericalError("empty guide family");
  DensityMatrix dm{guides.grid, {}};
  dm.rho.noalias() = phi.conjugate() * phi.transpose();
  dm.rho /= static_cast<double>(phi.cols());
  return trace_normalized(std::move(dm));
}

DensityMatrix slater_rdm(const Grid1D& grid, const std::vector<Eigen::VectorXcd>& orbitals) {
  const auto n = static_cast<Eigen::Index>(orbitals.size());
  const auto g = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXcd phi(g, n);
  for (Eigen::Index a = 0; a < n; ++a) phi.col(a) = orbitals[static_cast<std::size_t>(a)];
  // S_ab = <phi_a | phi_b> (conjugate on the first slot)
  const Eigen::MatrixXcd s = phi.adjoint() * grid.weights().asDiagonal() * phi;
  const Eigen::MatrixXcd s_inv = s.inverse();
  // rho(x, x') = sum_ab phi_b*(x) (S^-1)_ab phi_a(x')
  DensityMatrix dm{grid, {}};
  dm.rho = phi.conjugate() * s_inv.transpose() * phi.transpose();
  return trace_normalized(std::move(dm));
}

DensityMatrix rdm_identical(Spin spin, const GuideWaveSet& guides, const std::vector<Spin>& spins,
                            std::size_t* fallbacks) {
  std::vector<int> members;
  for (int i = 0; i < guides.n_electrons(); ++i)
    if (spins[static_cast<std::size_t>(i)] == spin) members.push_back(i);
  if (members.empty()) throw ConfigError("spin", "no electrons carry the requested spin");

  const auto g = static_cast<Eigen::Index>(guides.grid.size());
  const auto m = guides.n_walkers();
  const Eigen::VectorXd w = guides.grid.weights();
  DensityMatrix dm{guides.grid, Eigen::MatrixXcd::Zero(g, g)};
  std::size_t fallback_count = 0;

  // walkers whose blocks are orthonormal contribute through one stacked product
  std::vector<Eigen::Index> regular;
  for (std::size_t k = 0; k < m; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    double worst = 0.0;
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = a; b < members.size(); ++b) {
        const Complex s = inner_product(guides.grid, guides.waves[static_cast<std::size_t>(members[a])].col(kk),
                                        guides.waves[static_cast<std::size_t>(members[b])].col(kk));
        worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
      }
    if (worst <= 1e-6) {
      regular.push_back(kk);
      continue;
    }
    ++fallback_count;
    std::vector<Eigen::VectorXcd> orbs;
    for (int i : members) orbs.push_back(guides.waves[static_cast<std::size_t>(i)].col(kk));
    dm.rho += slater_rdm(guides.grid, orbs).rho;
  }
  if (!regular.empty()) {
    const auto stacked = static_cast<Eigen::Index>(regular.size() * members.size());
    Eigen::MatrixXcd phi(g, stacked);
    Eigen::Index c = 0;
    for (Eigen::Index kk : regular)
      for (int i : members) phi.col(c++) = guides.waves[static_cast<std::size_t>(i)].col(kk);
    dm.rho.noalias() += phi.conjugate() * phi.transpose() / static_cast<double>(members.size());
  }
  if (fallbacks) *fallbacks = fallback_count;
  if (fallback_count > 0)
    std::cerr << "warning: " << fallback_count
              << " walker blocks were not orthonormal; used the overlap-matrix RDM\n";
  dm.rho /= static_cast<double>(m);
  return trace_normalized(std::move(dm));
}

double linear_entropy_distinguishable(const DensityMatrix& rho) { return 1.0 - purity(rho); }

IdenticalEntropy linear_entropy_identical(const DensityMatrix& rho, int n_same_spin) {
  const double raw = 1.0 - static_cast<double>(n_same_spin) * purity(rho);
  return {std::max(raw, 0.0), raw};
}

void write_density_matrix_csv(std::ostream& os, const DensityMatrix& dm) {
  os << "x,x_prime,re,im\n";
  os << std::setprecision(17);
  const auto g = dm.grid.size();
  for (std::size_t a = 0; a < g; ++a)
    for (std::size_t b = 0; b < g; ++b) {
      const Complex v = dm.rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      os << dm.grid.x(a) << ',' << dm.grid.x(b) << ',' << v.real() << ',' << v.imag() << '\n';
    }
}

}  // namespace tdqmc
