#include "tdqmc/exact_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tdqmc/error.hpp"
#include "tdqmc/numerics.hpp"

namespace tdqmc {

namespace {

std::size_t ipow(std::size_t base, int exp) {
  std::size_t out = 1;
  for (int e = 0; e < exp; ++e) out *= base;
  return out;
}

// Product of trapezoid weights over all axes.
Eigen::VectorXd tensor_weights(const Grid1D& grid, int n) {
  const Eigen::VectorXd w1 = grid.weights();
  Eigen::VectorXd w = Eigen::VectorXd::Ones(1);
  for (int a = 0; a < n; ++a) {
    Eigen::VectorXd next(w.size() * w1.size());
    for (Eigen::Index i = 0; i < w.size(); ++i)
      next.segment(i * w1.size(), w1.size()) = w(i) * w1;
    w = std::move(next);
  }
  return w;
}

Eigen::VectorXd tensor_potential(const Grid1D& grid, int n, const SystemConfig& config) {
  const std::size_t g = grid.size();
  const std::size_t total = ipow(g, n);
  Eigen::VectorXd v(static_cast<Eigen::Index>(total));
  std::vector<std::size_t> c(static_cast<std::size_t>(n), 0);
  std::vector<double> x(static_cast<std::size_t>(n));
  for (std::size_t idx = 0; idx < total; ++idx) {
    for (int a = 0; a < n; ++a) x[static_cast<std::size_t>(a)] = grid.x(c[static_cast<std::size_t>(a)]);
    double e = 0.0;
    for (int a = 0; a < n; ++a) {
      e += v_en(x[static_cast<std::size_t>(a)], config.omega);
      for (int b = a + 1; b < n; ++b)
        e += v_ee(x[static_cast<std::size_t>(a)], x[static_cast<std::size_t>(b)], config.softening, config.coupling);
    }
    v(static_cast<Eigen::Index>(idx)) = e;
    for (int a = n - 1; a >= 0; --a) {
      if (++c[static_cast<std::size_t>(a)] < g) break;
      c[static_cast<std::size_t>(a)] = 0;
    }
  }
  return v;
}

struct Permutation {
  std::vector<int> map;  // new coordinate a takes old coordinate map[a]
  int sign;
};

std::vector<Permutation> block_permutations(int n, const std::vector<int>& block) {
  std::vector<int> order = block;
  std::sort(order.begin(), order.end());
  std::vector<Permutation> out;
  do {
    Permutation p{std::vector<int>(static_cast<std::size_t>(n)), 1};
    std::iota(p.map.begin(), p.map.end(), 0);
    for (std::size_t t = 0; t < block.size(); ++t) p.map[static_cast<std::size_t>(block[t])] = order[t];
    // parity by counting inversions
    int inv = 0;
    for (std::size_t a = 0; a < order.size(); ++a)
      for (std::size_t b = a + 1; b < order.size(); ++b) inv += order[a] > order[b];
    p.sign = inv % 2 == 0 ? 1 : -1;
    out.push_back(std::move(p));
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

// out[idx] = psi[idx with coordinates permuted]
void apply_permutation(const Eigen::VectorXcd& psi, std::size_t g, int n, const Permutation& p,
                       double factor, Eigen::VectorXcd& out) {
  std::vector<std::size_t> stride(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) stride[static_cast<std::size_t>(a)] = ipow(g, n - 1 - a);
  std::vector<std::size_t> c(static_cast<std::size_t>(n), 0);
  const auto total = static_cast<std::size_t>(psi.size());
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t src = 0;
    for (int a = 0; a < n; ++a)
      src += c[static_cast<std::size_t>(p.map[static_cast<std::size_t>(a)])] * stride[static_cast<std::size_t>(a)];
    out(static_cast<Eigen::Index>(idx)) += factor * psi(static_cast<Eigen::Index>(src));
    for (int a = n - 1; a >= 0; --a) {
      if (++c[static_cast<std::size_t>(a)] < g) break;
      c[static_cast<std::size_t>(a)] = 0;
    }
  }
}

// -1/2 d^2/dx_a^2 summed over axes, zero ghosts.
void add_kinetic(const Eigen::VectorXcd& psi, std::size_t g, int n, double dx, Eigen::VectorXcd& out) {
  const double scale = -0.5 / (dx * dx);
  const auto total = static_cast<std::size_t>(psi.size());
  const auto ig = static_cast<long>(g);
  for (int a = 0; a < n; ++a) {
    const std::size_t inner = ipow(g, n - 1 - a);
    const std::size_t outer = total / (inner * g);
    const auto s = static_cast<Eigen::Index>(inner);
    for (std::size_t o = 0; o < outer; ++o)
      for (long k = 0; k < ig; ++k) {
        const std::size_t row = (o * g + static_cast<std::size_t>(k)) * inner;
        for (std::size_t j = 0; j < inner; ++j) {
          const auto idx = static_cast<Eigen::Index>(row + j);
          Complex d2 = kD2Centre * psi(idx);
          if (k >= 1) d2 += kD2Near * psi(idx - s);
          if (k + 1 < ig) d2 += kD2Near * psi(idx + s);
          if (k >= 2) d2 += kD2Far * psi(idx - 2 * s);
          if (k + 2 < ig) d2 += kD2Far * psi(idx + 2 * s);
          out(idx) += scale * d2;
        }
      }
  }
}

// Crank-Nicolson for -1/2 d^2/dx_a^2 along every axis in turn. The
// pentadiagonal matrix is the same for every line, so its LDL^T factors are
// computed once and applied to all lines of an axis together.
void kinetic_step(Eigen::VectorXcd& psi, std::size_t g, int n, double dx, double dtau,
                  Eigen::VectorXcd& scratch) {
  const double a = 0.5 * dtau;
  const double inv = 1.0 / (dx * dx);
  const double t0 = -0.5 * kD2Centre * inv, t1 = -0.5 * kD2Near * inv, t2 = -0.5 * kD2Far * inv;
  const double e = a * t1, f = a * t2;
  std::vector<double> d(g), l1(g, 0.0), l2(g, 0.0);
  for (std::size_t k = 0; k < g; ++k) {
    double dk = 1.0 + a * t0;
    if (k >= 2) {
      l2[k] = f / d[k - 2];
      dk -= l2[k] * l2[k] * d[k - 2];
    }
    if (k >= 1) {
      l1[k] = (e - (k >= 2 ? l2[k] * d[k - 2] * l1[k - 1] : 0.0)) / d[k - 1];
      dk -= l1[k] * l1[k] * d[k - 1];
    }
    d[k] = dk;
  }
  const auto total = static_cast<std::size_t>(psi.size());
  scratch.resize(psi.size());
  const auto ig = static_cast<long>(g);
  for (int axis = 0; axis < n; ++axis) {
    const std::size_t inner = ipow(g, n - 1 - axis);
    const std::size_t outer = total / (inner * g);
    const auto s = static_cast<Eigen::Index>(inner);
    for (std::size_t o = 0; o < outer; ++o) {
      const std::size_t base = o * g * inner;
      // right-hand side (1 - a T) psi followed by forward substitution
      for (long k = 0; k < ig; ++k) {
        const std::size_t row = base + static_cast<std::size_t>(k) * inner;
        for (std::size_t j = 0; j < inner; ++j) {
          const auto idx = static_cast<Eigen::Index>(row + j);
          Complex tpsi = t0 * psi(idx);
          if (k >= 1) tpsi += t1 * psi(idx - s);
          if (k + 1 < ig) tpsi += t1 * psi(idx + s);
          if (k >= 2) tpsi += t2 * psi(idx - 2 * s);
          if (k + 2 < ig) tpsi += t2 * psi(idx + 2 * s);
          Complex z = psi(idx) - a * tpsi;
          if (k >= 1) z -= l1[static_cast<std::size_t>(k)] * scratch(idx - s);
          if (k >= 2) z -= l2[static_cast<std::size_t>(k)] * scratch(idx - 2 * s);
          scratch(idx) = z;
        }
      }
      for (long k = ig - 1; k >= 0; --k) {
        const std::size_t row = base + static_cast<std::size_t>(k) * inner;
        const double dk = d[static_cast<std::size_t>(k)];
        for (std::size_t j = 0; j < inner; ++j) {
          const auto idx = static_cast<Eigen::Index>(row + j);
          Complex y = scratch(idx) / dk;
          if (k + 1 < ig) y -= l1[static_cast<std::size_t>(k + 1)] * psi(idx + s);
          if (k + 2 < ig) y -= l2[static_cast<std::size_t>(k + 2)] * psi(idx + 2 * s);
          psi(idx) = y;
        }
      }
    }
  }
}

}  // namespace

std::size_t TensorWavefunction::index(const std::vector<std::size_t>& coords) const {
  std::size_t idx = 0;
  for (std::size_t c : coords) idx = idx * grid.size() + c;
  return idx;
}

std::vector<std::vector<int>> symmetry_blocks(Symmetry symmetry, const std::vector<Spin>& spins) {
  std::vector<std::vector<int>> blocks;
  const int n = static_cast<int>(spins.size());
  if (symmetry == Symmetry::symmetric) {
    std::vector<int> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    blocks.push_back(all);
  } else if (symmetry == Symmetry::antisymmetric) {
    for (Spin s : {Spin::up, Spin::down}) {
      std::vector<int> b;
      for (int i = 0; i < n; ++i)
        if (spins[static_cast<std::size_t>(i)] == s) b.push_back(i);
      if (b.size() > 1) blocks.push_back(b);
    }
  }
  return blocks;
}

void check_capacity(int n_electrons, std::size_t points_per_axis, std::size_t capacity) {
  if (n_electrons > 4)
    throw CapacityError("exact solver supports at most 4 electrons; " + std::to_string(n_electrons) +
                        " requested (storage grows as G^N)");
  double amplitudes = std::pow(static_cast<double>(points_per_axis), n_electrons);
  if (amplitudes > static_cast<double>(capacity))
    throw CapacityError("tensor grid needs " + std::to_string(static_cast<long long>(amplitudes)) +
                        " amplitudes, cap is " + std::to_string(capacity) +
                        "; reduce oracle.points or raise oracle.capacity");
}

double tensor_norm(const TensorWavefunction& psi) { return std::sqrt(tensor_inner(psi, psi).real()); }

Complex tensor_inner(const TensorWavefunction& a, const TensorWavefunction& b) {
  if (!(a.grid == b.grid) || a.n_electrons != b.n_electrons) throw GridMismatchError();
  const Eigen::VectorXd w = tensor_weights(a.grid, a.n_electrons);
  return (w.cast<Complex>().array() * a.amplitudes.array() * b.amplitudes.conjugate().array()).sum();
}

TensorWavefunction hamiltonian_apply(const TensorWavefunction& psi, const SystemConfig& config) {
  TensorWavefunction out = psi;
  const Eigen::VectorXd v = tensor_potential(psi.grid, psi.n_electrons, config);
  out.amplitudes = (v.cast<Complex>().array() * psi.amplitudes.array()).matrix();
  add_kinetic(psi.amplitudes, psi.grid.size(), psi.n_electrons, psi.grid.dx(), out.amplitudes);
  return out;
}

double rayleigh_quotient(const TensorWavefunction& psi, const SystemConfig& config) {
  const TensorWavefunction h = hamiltonian_apply(psi, config);
  return tensor_inner(h, psi).real() / tensor_inner(psi, psi).real();
}

TensorWavefunction symmetry_project(const TensorWavefunction& psi, Symmetry symmetry,
                                    const std::vector<std::vector<int>>& blocks) {
  TensorWavefunction out = psi;
  out.symmetry = symmetry;
  out.blocks = blocks;
  if (symmetry == Symmetry::none) return out;
  if (psi.n_electrons > 4) throw CapacityError("symmetry projection supports at most 4 electrons");
  const double before = tensor_norm(psi);
  for (const auto& block : blocks) {
    if (block.size() < 2) continue;
    const auto perms = block_permutations(psi.n_electrons, block);
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(out.amplitudes.size());
    const double factor = 1.0 / static_cast<double>(perms.size());
    for (const auto& p : perms) {
      const int sign = symmetry == Symmetry::antisymmetric ? p.sign : 1;
      apply_permutation(out.amplitudes, out.grid.size(), out.n_electrons, p, sign * factor, acc);
    }
    out.amplitudes = std::move(acc);
  }
  const double after = tensor_norm(out);
  if (!(after > 1e-12 * std::max(before, 1e-300)) || !(after > 1e-12))
    throw SymmetryError("symmetry projection annihilates the state");
  out.amplitudes /= after;
  return out;
}

TensorWavefunction symmetry_project(const TensorWavefunction& psi) {
  return symmetry_project(psi, psi.symmetry, psi.blocks);
}

double symmetry_violation(const TensorWavefunction& psi) {
  if (psi.symmetry == Symmetry::none) return 0.0;
  double worst = 0.0;
  for (const auto& block : psi.blocks)
    for (std::size_t s = 0; s < block.size(); ++s)
      for (std::size_t t = s + 1; t < block.size(); ++t) {
        Permutation swap{std::vector<int>(static_cast<std::size_t>(psi.n_electrons)), -1};
        std::iota(swap.map.begin(), swap.map.end(), 0);
        std::swap(swap.map[static_cast<std::size_t>(block[s])], swap.map[static_cast<std::size_t>(block[t])]);
        Eigen::VectorXcd swapped = Eigen::VectorXcd::Zero(psi.amplitudes.size());
        apply_permutation(psi.amplitudes, psi.grid.size(), psi.n_electrons, swap, 1.0, swapped);
        const double sign = psi.symmetry == Symmetry::antisymmetric ? -1.0 : 1.0;
        worst = std::max(worst, (psi.amplitudes - sign * swapped).cwiseAbs().maxCoeff());
      }
  return worst;
}

TensorWavefunction product_state(const std::vector<Eigen::VectorXcd>& orbitals, const Grid1D& grid) {
  TensorWavefunction psi;
  psi.n_electrons = static_cast<int>(orbitals.size());
  psi.grid = grid;
  Eigen::VectorXcd amp = Eigen::VectorXcd::Ones(1);
  for (const auto& phi : orbitals) {
    Eigen::VectorXcd next(amp.size() * phi.size());
    for (Eigen::Index i = 0; i < amp.size(); ++i) next.segment(i * phi.size(), phi.size()) = amp(i) * phi;
    amp = std::move(next);
  }
  psi.amplitudes = std::move(amp);
  return psi;
}

OracleResult exact_ground_state(const SystemConfig& config, Symmetry symmetry,
                                const OracleOptions& options) {
  const int n = config.n_electrons;
  if (static_cast<int>(config.spins.size()) != n)
    throw ConfigError("system.spins", "expected " + std::to_string(n) + " labels");
  const Grid1D& grid = options.grid;
  check_capacity(n, grid.size(), options.capacity);

  std::vector<Eigen::VectorXcd> start;
  for (int level : level_assignment(config.spins))
    start.push_back(harmonic_eigenfunction(grid, level, config.omega).values);
  TensorWavefunction psi = product_state(start, grid);
  psi = symmetry_project(psi, symmetry, symmetry_blocks(symmetry, config.spins));

  const Eigen::VectorXd v = tensor_potential(grid, n, config);
  const Eigen::VectorXcd half = (-0.5 * options.dtau * v.array()).exp().cast<Complex>().matrix();
  Eigen::VectorXcd scratch;

  OracleResult result;
  double previous = rayleigh_quotient(psi, config);
  std::vector<double> trace{previous};
  for (int step = 1; step <= options.max_steps; ++step) {
    psi.amplitudes.array() *= half.array();
    kinetic_step(psi.amplitudes, grid.size(), n, grid.dx(), options.dtau, scratch);
    psi.amplitudes.array() *= half.array();
    psi = symmetry_project(psi);
    if (symmetry == Symmetry::none) psi.amplitudes /= tensor_norm(psi);
    if (step % options.check_every != 0) continue;
    const double e = rayleigh_quotient(psi, config);
    if (!std::isfinite(e)) throw NumericalError("oracle energy became non-finite");
    trace.push_back(e);
    if (std::abs(e - previous) / options.check_every < options.tolerance) {
      result.psi = std::move(psi);
      result.energy = e;
      result.steps = step;
      return result;
    }
    previous = e;
  }
  throw ConvergenceError("exact solver did not converge in " + std::to_string(options.max_steps) + " steps",
                         trace);
}

DensityMatrix exact_one_body_rdm(const TensorWavefunction& psi, int electron) {
  const int n = psi.n_electrons;
  const auto g = static_cast<Eigen::Index>(psi.grid.size());
  Eigen::VectorXcd amp = psi.amplitudes;
  if (electron != 0) {
    // move the requested coordinate to the front
    Permutation p{std::vector<int>(static_cast<std::size_t>(n)), 1};
    std::iota(p.map.begin(), p.map.end(), 0);
    std::swap(p.map[0], p.map[static_cast<std::size_t>(electron)]);
    Eigen::VectorXcd moved = Eigen::VectorXcd::Zero(amp.size());
    apply_permutation(amp, psi.grid.size(), n, p, 1.0, moved);
    amp = std::move(moved);
  }
  const Eigen::Index rest = amp.size() / g;
  const Eigen::VectorXd w_rest = tensor_weights(psi.grid, n - 1);
  // column h holds psi(x_h, rest)
  const Eigen::Map<const Eigen::MatrixXcd> b(amp.data(), rest, g);
  DensityMatrix dm{psi.grid, {}};
  dm.rho = b.adjoint() * w_rest.asDiagonal() * b;
  return trace_normalized(std::move(dm));
}

}  // namespace tdqmc
