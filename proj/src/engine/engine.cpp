#include "tdqmc/engine.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "tdqmc/error.hpp"
#include "tdqmc/numerics.hpp"
#include "tdqmc/parallel.hpp"

namespace tdqmc {

std::vector<double> WalkerEnsemble::electron(int j) const {
  std::vector<double> out(static_cast<std::size_t>(positions.cols()));
  for (Eigen::Index l = 0; l < positions.cols(); ++l) out[static_cast<std::size_t>(l)] = positions(j, l);
  return out;
}

Orbital GuideWaveSet::wave(int i, std::size_t k) const {
  return Orbital(grid, waves[static_cast<std::size_t>(i)].col(static_cast<Eigen::Index>(k)));
}

namespace {

struct PointValue {
  Complex value;
  Complex derivative;
};

Complex node_derivative(const Eigen::Ref<const Eigen::VectorXcd>& phi, Eigen::Index g, double dx) {
  const Eigen::Index n = phi.size();
  const Complex left = g > 0 ? phi(g - 1) : Complex{};
  const Complex right = g + 1 < n ? phi(g + 1) : Complex{};
  return (right - left) / (2.0 * dx);
}

PointValue evaluate(const Grid1D& grid, const Eigen::Ref<const Eigen::VectorXcd>& phi, double x) {
  const auto loc = grid.locate(x);
  const auto c = static_cast<Eigen::Index>(loc.cell);
  const double f = loc.frac;
  return {(1.0 - f) * phi(c) + f * phi(c + 1),
          (1.0 - f) * node_derivative(phi, c, grid.dx()) + f * node_derivative(phi, c + 1, grid.dx())};
}

// (-1/2 phi'' + v_en phi) / phi at x with both numerator and denominator
// interpolated from the nodes; exact for grid eigenvectors.
Complex local_one_body_ratio(const Grid1D& grid, const Eigen::Ref<const Eigen::VectorXcd>& phi,
                             double x, double omega, Complex& value) {
  const auto loc = grid.locate(x);
  const auto c = static_cast<Eigen::Index>(loc.cell);
  const double inv = 1.0 / (grid.dx() * grid.dx());
  auto h = [&](Eigen::Index g) {
    return -0.5 * second_difference(phi, g) * inv + v_en(grid.x(static_cast<std::size_t>(g)), omega) * phi(g);
  };
  const double f = loc.frac;
  value = (1.0 - f) * phi(c) + f * phi(c + 1);
  return ((1.0 - f) * h(c) + f * h(c + 1)) / value;
}

double floor_of(const Eigen::Ref<const Eigen::VectorXcd>& phi, double relative) {
  return relative * phi.cwiseAbs().maxCoeff();
}

}  // namespace

double drift_velocity(const Orbital& phi, double x, double nodal_floor) {
  const PointValue p = evaluate(phi.grid, phi.values, x);
  if (std::abs(p.value) <= floor_of(phi.values, nodal_floor))
    throw NodalRegionError("drift requested inside a nodal region");
  return (p.derivative / p.value).real();
}

double bohmian_velocity(const Orbital& phi, double x, double nodal_floor) {
  const PointValue p = evaluate(phi.grid, phi.values, x);
  if (std::abs(p.value) <= floor_of(phi.values, nodal_floor))
    throw NodalRegionError("velocity requested inside a nodal region");
  return (p.derivative / p.value).imag();
}

Engine::Engine(SystemConfig config, EngineOptions options)
    : config_(std::move(config)), options_(std::move(options)) {
  config_.validate();
  interaction_ = interaction_matrix(config_);
  confinement_ = confinement_potential(config_.grid, config_.omega);
  weights_ = config_.grid.weights();
}

TDQMCState Engine::initialize(const HFState& hf, const NonlocalityParams& params) const {
  const int n = config_.n_electrons;
  const std::size_t m = config_.n_walkers;
  if (static_cast<int>(hf.orbitals.size()) != n)
    throw ConfigError("system.n_electrons", "HF state has a different electron count");
  if (params.size() != n) throw ConfigError("nonlocality", "parameter table size differs from N");

  TDQMCState state;
  state.params = params;
  state.guides.grid = config_.grid;
  for (int i = 0; i < n; ++i)
    state.guides.waves.push_back(hf.orbitals[static_cast<std::size_t>(i)].values.replicate(1, static_cast<Eigen::Index>(m)));

  WalkerEnsemble& ens = state.ensemble;
  ens.spins = config_.spins;
  ens.positions.resize(n, static_cast<Eigen::Index>(m));
  ens.streams.reserve(m);
  for (std::size_t k = 0; k < m; ++k) ens.streams.emplace_back(options_.seed, k);

  std::vector<DensitySampler> samplers;
  for (int i = 0; i < n; ++i)
    samplers.emplace_back(config_.grid, hf.orbitals[static_cast<std::size_t>(i)].values.cwiseAbs2());
  for (std::size_t k = 0; k < m; ++k)
    for (int i = 0; i < n; ++i)
      ens.positions(i, static_cast<Eigen::Index>(k)) = samplers[static_cast<std::size_t>(i)].draw(ens.streams[k]);

  state.reference_std = ensemble_stds(ens);
  return state;
}

std::vector<double> Engine::source_widths(const TDQMCState& state) const {
  if (options_.sigma_update == SigmaUpdate::frozen) return state.reference_std;
  return ensemble_stds(state.ensemble);
}

void Engine::advance_walkers(TDQMCState& state) const {
  const int n = config_.n_electrons;
  const Grid1D& grid = config_.grid;
  const double dtau = config_.dtau;
  const double sqrt_dtau = std::sqrt(dtau);
  const double max_step = options_.drift_cap * sqrt_dtau;
  WalkerEnsemble& ens = state.ensemble;
  const GuideWaveSet& guides = state.guides;

  parallel_for(ens.n_walkers(), options_.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const auto kk = static_cast<Eigen::Index>(k);
      RandomStream& rng = ens.streams[k];
      for (int i = 0; i < n; ++i) {
        const auto phi = guides.waves[static_cast<std::size_t>(i)].col(kk);
        const double floor = floor_of(phi, options_.nodal_floor);
        auto resample = [&] {
          const DensitySampler sampler(grid, phi.cwiseAbs2());
          return sampler.draw(rng);
        };
        double x = ens.positions(i, kk);
        PointValue p = evaluate(grid, phi, x);
        if (!grid.contains(x) || std::abs(p.value) <= floor) {
          x = resample();
          p = evaluate(grid, phi, x);
        }
        double drift_step = (p.derivative / p.value).real() * dtau;
        drift_step = std::clamp(drift_step, -max_step, max_step);
        x += drift_step + options_.noise_scale * rng.normal() * sqrt_dtau;
        if (!grid.contains(x) || std::abs(evaluate(grid, phi, x).value) <= floor) x = resample();
        ens.positions(i, kk) = x;
      }
    }
  });
}

void Engine::propagate_guides(TDQMCState& state) const {
  const int n = config_.n_electrons;
  const auto g_size = static_cast<Eigen::Index>(config_.grid.size());
  const auto m = static_cast<Eigen::Index>(config_.n_walkers);
  const double dtau = config_.dtau;
  const long step = state.ensemble.step_index;
  GuideWaveSet& guides = state.guides;

  std::vector<bool> active(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) active[static_cast<std::size_t>(i)] = !options_.is_frozen(i);

  const std::vector<double> widths = source_widths(state);
  const EffectivePotentialTable potentials(state.ensemble, state.params, config_, widths, active);

  // Exchange actions from the pre-step guides, batched over walkers. The pair
  // integral for (j, i) is the conjugate of the one for (i, j).
  std::vector<Eigen::MatrixXcd> exchange(static_cast<std::size_t>(n));
  if (config_.coupling != 0.0) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (config_.spins[i] != config_.spins[j]) continue;
        const bool ai = active[static_cast<std::size_t>(i)], aj = active[static_cast<std::size_t>(j)];
        if (!ai && !aj) continue;
        const Eigen::MatrixXcd& phi_i = guides.waves[static_cast<std::size_t>(i)];
        const Eigen::MatrixXcd& phi_j = guides.waves[static_cast<std::size_t>(j)];
        const Eigen::MatrixXcd pair =
            (phi_i.array() * phi_j.conjugate().array()).colwise() * weights_.array().cast<Complex>();
        const Eigen::MatrixXcd conv = interaction_ * pair;
        if (ai) {
          auto& x = exchange[static_cast<std::size_t>(i)];
          if (x.size() == 0) x = Eigen::MatrixXcd::Zero(g_size, m);
          x.array() -= conv.array() * phi_j.array();
        }
        if (aj) {
          auto& x = exchange[static_cast<std::size_t>(j)];
          if (x.size() == 0) x = Eigen::MatrixXcd::Zero(g_size, m);
          x.array() -= conv.conjugate().array() * phi_i.array();
        }
      }
    }
  }

  // Gram-Schmidt order per spin block: frozen orbitals first so they are
  // never modified, then active ones in index order.
  std::vector<std::vector<int>> blocks;
  for (Spin s : {Spin::up, Spin::down}) {
    std::vector<int> block;
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < n; ++i)
        if (config_.spins[i] == s && active[static_cast<std::size_t>(i)] == (pass == 1)) block.push_back(i);
    if (!block.empty()) blocks.push_back(std::move(block));
  }

  parallel_for(static_cast<std::size_t>(m), options_.threads, [&](std::size_t begin, std::size_t end) {
    Eigen::VectorXd v(g_size);
    std::vector<Eigen::VectorXcd> cols(static_cast<std::size_t>(n));
    for (std::size_t k = begin; k < end; ++k) {
      const auto kk = static_cast<Eigen::Index>(k);
      for (int i = 0; i < n; ++i) {
        auto& col = cols[static_cast<std::size_t>(i)];
        col = guides.waves[static_cast<std::size_t>(i)].col(kk);
        if (!active[static_cast<std::size_t>(i)]) continue;
        if (exchange[static_cast<std::size_t>(i)].size() != 0)
          col -= dtau * exchange[static_cast<std::size_t>(i)].col(kk);
        potentials.potential(i, k, v);
        v += confinement_;
        crank_nicolson_inplace(col, v, config_.grid.dx(), dtau);
        if (!col.allFinite()) throw PropagationError(i, static_cast<long>(k), step);
      }
      for (const auto& block : blocks) {
        std::vector<Eigen::VectorXcd*> ptrs;
        for (int i : block) ptrs.push_back(&cols[static_cast<std::size_t>(i)]);
        gram_schmidt_inplace(config_.grid, ptrs);
      }
      for (int i = 0; i < n; ++i)
        if (active[static_cast<std::size_t>(i)])
          guides.waves[static_cast<std::size_t>(i)].col(kk) = cols[static_cast<std::size_t>(i)];
    }
  });
}

void Engine::step(TDQMCState& state) const {
  advance_walkers(state);
  propagate_guides(state);
  ++state.ensemble.step_index;
}

void Engine::run(TDQMCState& state, int steps) const {
  for (int s = 0; s < steps; ++s) {
    step(state);
    const bool last = s + 1 == steps;
    if (last || (options_.trace_every > 0 && state.ensemble.step_index % options_.trace_every == 0)) {
      const EnergyEstimate e = energy(state);
      state.energy_trace.push_back({state.ensemble.step_index, e.mean, e.std_error});
    }
  }
}

EnergyEstimate Engine::energy(const TDQMCState& state) const {
  const int n = config_.n_electrons;
  const auto m = static_cast<Eigen::Index>(state.ensemble.n_walkers());
  const Grid1D& grid = config_.grid;
  const GuideWaveSet& guides = state.guides;
  const WalkerEnsemble& ens = state.ensemble;

  // exchange correction per walker: -sum_{i<j, same spin} Re[(w f)^H V (w f)], f = phi_i phi_j*
  Eigen::VectorXd exchange = Eigen::VectorXd::Zero(m);
  if (config_.coupling != 0.0) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if (config_.spins[i] != config_.spins[j]) continue;
        const Eigen::MatrixXcd pair =
            (guides.waves[static_cast<std::size_t>(i)].array() *
             guides.waves[static_cast<std::size_t>(j)].conjugate().array())
                .colwise() *
            weights_.array().cast<Complex>();
        const Eigen::MatrixXcd conv = interaction_ * pair;
        exchange -= (pair.conjugate().array() * conv.array()).colwise().sum().real().matrix().transpose();
      }
  }

  std::vector<double> local(static_cast<std::size_t>(m));
  std::vector<char> keep(static_cast<std::size_t>(m), 1);
  parallel_for(static_cast<std::size_t>(m), options_.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const auto kk = static_cast<Eigen::Index>(k);
      double e = exchange(kk);
      for (int i = 0; i < n && keep[k]; ++i) {
        const auto phi = guides.waves[static_cast<std::size_t>(i)].col(kk);
        const double x = ens.positions(i, kk);
        Complex value;
        const Complex ratio = local_one_body_ratio(grid, phi, x, config_.omega, value);
        if (!grid.contains(x) || std::abs(value) <= floor_of(phi, options_.nodal_floor)) {
          keep[k] = 0;
          break;
        }
        e += ratio.real();
        for (int j = 0; j < i; ++j)
          e += v_ee(x, ens.positions(j, kk), config_.softening, config_.coupling);
      }
      local[k] = e;
    }
  });

  std::vector<double> kept;
  kept.reserve(local.size());
  for (std::size_t k = 0; k < local.size(); ++k)
    if (keep[k]) kept.push_back(local[k]);

  EnergyEstimate out;
  out.excluded = local.size() - kept.size();
  out.excluded_fraction = static_cast<double>(out.excluded) / static_cast<double>(local.size());
  out.exchange = exchange.mean();
  if (kept.empty()) throw NumericalError("every walker sits in a nodal region");

  double sum = 0.0;
  for (double e : kept) sum += e;
  out.mean = sum / static_cast<double>(kept.size());

  const std::size_t blocks = std::min<std::size_t>(static_cast<std::size_t>(std::max(options_.energy_blocks, 2)), kept.size());
  if (blocks >= 2) {
    std::vector<double> means(blocks, 0.0);
    std::vector<std::size_t> counts(blocks, 0);
    for (std::size_t k = 0; k < kept.size(); ++k) {
      const std::size_t b = k * blocks / kept.size();
      means[b] += kept[k];
      ++counts[b];
    }
    double var = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) {
      means[b] /= static_cast<double>(counts[b]);
      var += (means[b] - out.mean) * (means[b] - out.mean);
    }
    out.std_error = std::sqrt(var / static_cast<double>(blocks * (blocks - 1)));
  }
  return out;
}

TDQMCState Engine::prepare_ground_state(const HFState& hf, const NonlocalityParams& params) const {
  TDQMCState state = initialize(hf, params);
  run(state, config_.n_steps);
  return state;
}

WalkerEnsemble advance_walkers_step(const TDQMCState& state, const SystemConfig& config,
                                    const EngineOptions& options) {
  TDQMCState copy = state;
  Engine(config, options).advance_walkers(copy);
  return std::move(copy.ensemble);
}

GuideWaveSet propagate_guides_step(const TDQMCState& state, const SystemConfig& config,
                                   const EngineOptions& options) {
  TDQMCState copy = state;
  Engine(config, options).propagate_guides(copy);
  return std::move(copy.guides);
}

EnergyEstimate tdqmc_energy(const TDQMCState& state, const SystemConfig& config,
                            const EngineOptions& options) {
  return Engine(config, options).energy(state);
}

TDQMCState prepare_ground_state(const SystemConfig& config, const NonlocalityParams& params,
                                const HFState& hf, const EngineOptions& options) {
  return Engine(config, options).prepare_ground_state(hf, params);
}

double orthonormality_error(const GuideWaveSet& guides, const std::vector<Spin>& spins) {
  double worst = 0.0;
  const int n = guides.n_electrons();
  for (std::size_t k = 0; k < guides.n_walkers(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        if (spins[i] != spins[j]) continue;
        const Complex s = inner_product(guides.grid, guides.waves[static_cast<std::size_t>(i)].col(kk),
                                        guides.waves[static_cast<std::size_t>(j)].col(kk));
        worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
      }
  }
  return worst;
}

}  // namespace tdqmc
