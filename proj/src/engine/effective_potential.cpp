#include <cmath>

#include "tdqmc/engine.hpp"
#include "tdqmc/error.hpp"

namespace tdqmc {

namespace {

constexpr int kRouteNone = -1;
constexpr int kRouteLocal = -2;
constexpr double kTinyWeight = 1e-280;

Eigen::MatrixXd source_interaction(const WalkerEnsemble& ensemble, int j,
                                   const SystemConfig& config) {
  const Grid1D& grid = config.grid;
  const auto m = static_cast<Eigen::Index>(ensemble.n_walkers());
  Eigen::MatrixXd a(static_cast<Eigen::Index>(grid.size()), m);
  for (Eigen::Index l = 0; l < m; ++l) {
    const double r = ensemble.positions(j, l);
    for (std::size_t g = 0; g < grid.size(); ++g)
      a(static_cast<Eigen::Index>(g), l) = v_ee(grid.x(g), r, config.softening, config.coupling);
  }
  return a;
}

}  // namespace

double kernel(double xj, double xjk, double sigma) {
  if (std::isinf(sigma)) return 1.0;
  if (!(sigma > 0.0)) throw NumericalError("kernel width must be positive; use the local limit");
  const double d = xj - xjk;
  return std::exp(-d * d / (2.0 * sigma * sigma));
}

double weight_Z(int j, std::size_t k, const WalkerEnsemble& ensemble, double sigma) {
  const double center = ensemble.positions(j, static_cast<Eigen::Index>(k));
  double z = 0.0;
  for (Eigen::Index l = 0; l < ensemble.positions.cols(); ++l)
    z += kernel(ensemble.positions(j, l), center, sigma);
  return z;
}

std::vector<double> ensemble_stds(const WalkerEnsemble& ensemble) {
  std::vector<double> out;
  for (int j = 0; j < ensemble.n_electrons(); ++j) {
    const auto row = ensemble.electron(j);
    out.push_back(row.size() >= 2 ? ensemble_std(row) : 0.0);
  }
  return out;
}

Eigen::VectorXd effective_potential(int i, std::size_t k, const WalkerEnsemble& ensemble,
                                    const NonlocalityParams& params, const SystemConfig& config,
                                    const std::vector<double>& source_std) {
  const Grid1D& grid = config.grid;
  const auto m = ensemble.positions.cols();
  const auto kk = static_cast<Eigen::Index>(k);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.size()));
  for (int j = 0; j < ensemble.n_electrons(); ++j) {
    if (j == i) continue;
    const double sigma = params(j, i).sigma(source_std[static_cast<std::size_t>(j)]);
    if (sigma == 0.0) {
      for (std::size_t g = 0; g < grid.size(); ++g)
        out(static_cast<Eigen::Index>(g)) +=
            v_ee(grid.x(g), ensemble.positions(j, kk), config.softening, config.coupling);
      continue;
    }
    const double center = ensemble.positions(j, kk);
    double z = 0.0;
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(out.size());
    for (Eigen::Index l = 0; l < m; ++l) {
      const double r = ensemble.positions(j, l);
      const double w = kernel(r, center, sigma);
      z += w;
      if (w == 0.0) continue;
      for (std::size_t g = 0; g < grid.size(); ++g)
        acc(static_cast<Eigen::Index>(g)) += w * v_ee(grid.x(g), r, config.softening, config.coupling);
    }
    out += acc / z;
  }
  return out;
}

Eigen::VectorXd effective_potential(int i, std::size_t k, const WalkerEnsemble& ensemble,
                                    const NonlocalityParams& params, const SystemConfig& config) {
  return effective_potential(i, k, ensemble, params, config, ensemble_stds(ensemble));
}

EffectivePotentialTable::EffectivePotentialTable(const WalkerEnsemble& ensemble,
                                                 const NonlocalityParams& params,
                                                 const SystemConfig& config,
                                                 const std::vector<double>& source_std,
                                                 const std::vector<bool>& targets)
    : ensemble_(ensemble),
      config_(config),
      grid_(config.grid),
      n_(ensemble.n_electrons()),
      mean_field_(static_cast<std::size_t>(n_)),
      route_(static_cast<std::size_t>(n_ * n_), kRouteNone),
      pair_potential_(static_cast<std::size_t>(n_)) {
  const auto g_size = static_cast<Eigen::Index>(grid_.size());
  const auto m = static_cast<Eigen::Index>(ensemble.n_walkers());
  const Eigen::VectorXd nodes = grid_.coordinates();

  auto source = [&](int j) -> const Eigen::MatrixXd& {
    auto& a = pair_potential_[static_cast<std::size_t>(j)];
    if (a.size() == 0) a = source_interaction(ensemble, j, config);
    return a;
  };

  std::vector<Eigen::VectorXd> source_mean(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) {
    mean_field_[static_cast<std::size_t>(i)] = Eigen::VectorXd::Zero(g_size);
    if (!targets[static_cast<std::size_t>(i)]) continue;
    for (int j = 0; j < n_; ++j) {
      if (j == i) continue;
      const double sigma = params(j, i).sigma(source_std[static_cast<std::size_t>(j)]);
      int& route = route_[static_cast<std::size_t>(j * n_ + i)];
      if (std::isinf(sigma)) {
        auto& mean = source_mean[static_cast<std::size_t>(j)];
        if (mean.size() == 0) mean = source(j).rowwise().mean();
        mean_field_[static_cast<std::size_t>(i)] += mean;
        route = kRouteNone;
      } else if (sigma == 0.0) {
        source(j);
        route = kRouteLocal;
      } else {
        int found = -1;
        for (std::size_t w = 0; w < windows_.size(); ++w)
          if (windows_[w].source == j && windows_[w].sigma == sigma) found = static_cast<int>(w);
        if (found < 0) {
          Window win{j, sigma, {}, {}};
          Eigen::MatrixXd k_mat(m, g_size);
          const double inv = 1.0 / (2.0 * sigma * sigma);
          for (Eigen::Index c = 0; c < g_size; ++c)
            for (Eigen::Index l = 0; l < m; ++l) {
              const double d = ensemble.positions(j, l) - nodes(c);
              k_mat(l, c) = std::exp(-d * d * inv);
            }
          win.weight = k_mat.colwise().sum().transpose();
          win.table.noalias() = source(j) * k_mat;
          for (Eigen::Index c = 0; c < g_size; ++c)
            if (win.weight(c) > kTinyWeight) win.table.col(c) /= win.weight(c);
          windows_.push_back(std::move(win));
          found = static_cast<int>(windows_.size()) - 1;
        }
        route = found;
      }
    }
  }
}

void EffectivePotentialTable::potential(int i, std::size_t k, Eigen::Ref<Eigen::VectorXd> out) const {
  const auto kk = static_cast<Eigen::Index>(k);
  out = mean_field_[static_cast<std::size_t>(i)];
  for (int j = 0; j < n_; ++j) {
    if (j == i) continue;
    const int route = route_[static_cast<std::size_t>(j * n_ + i)];
    if (route == kRouteNone) continue;
    const Eigen::MatrixXd& a = pair_potential_[static_cast<std::size_t>(j)];
    if (route == kRouteLocal) {
      out += a.col(kk);
      continue;
    }
    const Window& win = windows_[static_cast<std::size_t>(route)];
    const double center = ensemble_.positions(j, kk);
    const auto loc = grid_.locate(center);
    const auto c = static_cast<Eigen::Index>(loc.cell);
    if (win.weight(c) > kTinyWeight && win.weight(c + 1) > kTinyWeight) {
      out += (1.0 - loc.frac) * win.table.col(c) + loc.frac * win.table.col(c + 1);
      continue;
    }
    // window centre far from every node-centred table entry: direct sum
    double z = 0.0;
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(out.size());
    for (Eigen::Index l = 0; l < a.cols(); ++l) {
      const double w = kernel(ensemble_.positions(j, l), center, win.sigma);
      z += w;
      if (w > 0.0) acc += w * a.col(l);
    }
    out += acc / z;
  }
}

}  // namespace tdqmc
