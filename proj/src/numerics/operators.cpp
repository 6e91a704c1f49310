#include <cmath>
#include <vector>

#include "tdqmc/error.hpp"
#include "tdqmc/numerics.hpp"

namespace tdqmc {

void laplacian_into(const Eigen::Ref<const Eigen::VectorXcd>& phi, double dx,
                    Eigen::Ref<Eigen::VectorXcd> out) {
  const Eigen::Index n = phi.size();
  const double inv = 1.0 / (dx * dx);
  for (Eigen::Index g = 0; g < n; ++g) out(g) = second_difference(phi, g) * inv;
}

Orbital laplacian(const Orbital& phi) {
  Orbital out(phi.grid);
  laplacian_into(phi.values, phi.grid.dx(), out.values);
  return out;
}

Orbital gradient(const Orbital& phi) {
  Orbital out(phi.grid);
  const Eigen::Index n = phi.values.size();
  const double inv = 0.5 / phi.grid.dx();
  for (Eigen::Index g = 0; g < n; ++g) {
    const Complex left = g > 0 ? phi.values(g - 1) : Complex{};
    const Complex right = g + 1 < n ? phi.values(g + 1) : Complex{};
    out.values(g) = (right - left) * inv;
  }
  return out;
}

Complex inner_product(const Grid1D& grid, const Eigen::Ref<const Eigen::VectorXcd>& phi,
                      const Eigen::Ref<const Eigen::VectorXcd>& chi) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  if (phi.size() != n || chi.size() != n) throw GridMismatchError();
  // interior nodes at full weight, ends at half
  Complex sum = (phi.segment(1, n - 2).array() * chi.segment(1, n - 2).conjugate().array()).sum();
  sum += 0.5 * (phi(0) * std::conj(chi(0)) + phi(n - 1) * std::conj(chi(n - 1)));
  return sum * grid.dx();
}

Complex inner_product(const Orbital& phi, const Orbital& chi) {
  if (!(phi.grid == chi.grid)) throw GridMismatchError();
  return inner_product(phi.grid, phi.values, chi.values);
}

double norm(const Orbital& phi) { return std::sqrt(inner_product(phi, phi).real()); }

Orbital normalized(const Orbital& phi) {
  const double n = norm(phi);
  if (!(n > 0.0)) throw NumericalError("cannot normalize a zero orbital");
  return Orbital(phi.grid, phi.values / n);
}

void gram_schmidt_inplace(const Grid1D& grid, std::vector<Eigen::VectorXcd*>& columns) {
  for (std::size_t a = 0; a < columns.size(); ++a) {
    Eigen::VectorXcd& v = *columns[a];
    const double original = inner_product(grid, v, v).real();
    if (!(original > 0.0)) throw DegeneracyError("zero vector in Gram-Schmidt input");
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t b = 0; b < a; ++b) {
        const Eigen::VectorXcd& u = *columns[b];
        v -= inner_product(grid, v, u) * u;
      }
    }
    const double remaining = inner_product(grid, v, v).real();
    // remaining/original is the squared sine of the angle to the span of the
    // previous vectors; 1e-12 corresponds to an overlap condition number ~1e12
    if (!(remaining > 1e-12 * original))
      throw DegeneracyError("orbital set is numerically linearly dependent");
    v /= std::sqrt(remaining);
  }
}

std::vector<Orbital> gram_schmidt(const std::vector<Orbital>& orbitals) {
  std::vector<Orbital> out = orbitals;
  if (out.empty()) return out;
  std::vector<Eigen::VectorXcd*> cols;
  for (auto& o : out) {
    if (!(o.grid == out.front().grid)) throw GridMismatchError();
    cols.push_back(&o.values);
  }
  gram_schmidt_inplace(out.front().grid, cols);
  return out;
}

void crank_nicolson_inplace(Eigen::Ref<Eigen::VectorXcd> phi,
                            const Eigen::Ref<const Eigen::VectorXd>& v_total, double dx,
                            double dtau) {
  const Eigen::Index n = phi.size();
  if (dtau == 0.0) return;
  // Solve (1 + a H) y = (1 - a H) phi with a = dtau/2. H is symmetric
  // pentadiagonal and positive definite for v >= 0, so an LDL^T sweep
  // without pivoting is used.
  const double a = 0.5 * dtau;
  const double inv = 1.0 / (dx * dx);
  const double t0 = -0.5 * kD2Centre * inv;
  const double e = a * (-0.5 * kD2Near * inv);
  const double f = a * (-0.5 * kD2Far * inv);

  thread_local std::vector<Complex> z;
  thread_local std::vector<double> d, l1, l2;
  const auto un = static_cast<std::size_t>(n);
  z.resize(un);
  d.resize(un);
  l1.resize(un);
  l2.resize(un);

  for (Eigen::Index g = 0; g < n; ++g) {
    const Complex h_phi = -0.5 * inv * second_difference(phi, g) + v_total(g) * phi(g);
    z[g] = phi(g) - a * h_phi;
  }
  for (Eigen::Index g = 0; g < n; ++g) {
    const double diag = 1.0 + a * (t0 + v_total(g));
    double lo2 = 0.0, lo1 = 0.0, dg = diag;
    if (g >= 2) {
      lo2 = f / d[g - 2];
      dg -= lo2 * lo2 * d[g - 2];
    }
    if (g >= 1) {
      lo1 = (e - (g >= 2 ? lo2 * d[g - 2] * l1[g - 1] : 0.0)) / d[g - 1];
      dg -= lo1 * lo1 * d[g - 1];
    }
    l1[g] = lo1;
    l2[g] = lo2;
    d[g] = dg;
    if (g >= 1) z[g] -= lo1 * z[g - 1];
    if (g >= 2) z[g] -= lo2 * z[g - 2];
  }
  for (Eigen::Index g = n - 1; g >= 0; --g) {
    Complex y = z[g] / d[g];
    if (g + 1 < n) y -= l1[g + 1] * phi(g + 1);
    if (g + 2 < n) y -= l2[g + 2] * phi(g + 2);
    phi(g) = y;
  }
}

Orbital imag_time_step(const Orbital& phi, const Eigen::VectorXd& v_total, double dtau) {
  if (dtau < 0.0) throw NumericalError("imaginary-time step must be non-negative");
  if (static_cast<std::size_t>(v_total.size()) != phi.size()) throw GridMismatchError();
  if (!v_total.allFinite()) throw NumericalError("non-finite potential value");
  Orbital out = phi;
  crank_nicolson_inplace(out.values, v_total, phi.grid.dx(), dtau);
  return out;
}

Complex interpolate(const Grid1D& grid, const Eigen::Ref<const Eigen::VectorXcd>& values,
                    double x) {
  const auto loc = grid.locate(x);
  const auto c = static_cast<Eigen::Index>(loc.cell);
  return (1.0 - loc.frac) * values(c) + loc.frac * values(c + 1);
}

double energy_expectation(const Orbital& phi, const Eigen::VectorXd& v) {
  Orbital h = laplacian(phi);
  h.values = -0.5 * h.values + (v.array() * phi.values.array()).matrix();
  return inner_product(h, phi).real() / inner_product(phi, phi).real();
}

}  // namespace tdqmc
