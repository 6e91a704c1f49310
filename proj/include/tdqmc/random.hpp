#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tdqmc/grid.hpp"

namespace tdqmc {

/// Seedable random stream. Walker k of an ensemble owns stream
/// RandomStream(master_seed, k); streams are never shared between tasks.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t stream_id);

  double uniform();
  double normal();

  /// Full engine + distribution state, text form; restores bit-exactly.
  std::string serialize() const;
  static RandomStream deserialize(const std::string& state);

  bool operator==(const RandomStream& other) const { return serialize() == other.serialize(); }

 private:
  RandomStream() = default;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

/// Inverse-CDF sampler over a non-negative nodal density. Between nodes the
/// CDF is linear with cell masses given by the trapezoidal rule.
class DensitySampler {
 public:
  DensitySampler(const Grid1D& grid, const Eigen::Ref<const Eigen::VectorXd>& density);
  double draw(RandomStream& rng) const;

 private:
  Grid1D grid_;
  std::vector<double> cdf_;  // cdf_[g] = mass of [x_0, x_g], normalized
};

std::vector<double> sample_positions(const Grid1D& grid, const Eigen::VectorXd& density,
                                     std::size_t count, RandomStream& rng);

/// Population standard deviation. Needs at least two positions.
double ensemble_std(std::span<const double> positions);

}  // namespace tdqmc
