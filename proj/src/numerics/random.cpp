#include "tdqmc/random.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tdqmc/error.hpp"

namespace tdqmc {

RandomStream::RandomStream(std::uint64_t master_seed, std::uint64_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32), 0x7d51u};
  engine_.seed(seq);
}

double RandomStream::uniform() { return std::generate_canonical<double, 53>(engine_); }

double RandomStream::normal() { return normal_(engine_); }

std::string RandomStream::serialize() const {
  std::ostringstream os;
  os << engine_ << ' ' << normal_;
  return os.str();
}

RandomStream RandomStream::deserialize(const std::string& state) {
  RandomStream out;
  std::istringstream is(state);
  is >> out.engine_ >> out.normal_;
  if (!is) throw Error("corrupt random stream state");
  return out;
}

DensitySampler::DensitySampler(const Grid1D& grid, const Eigen::Ref<const Eigen::VectorXd>& density)
    : grid_(grid), cdf_(grid.size(), 0.0) {
  if (static_cast<std::size_t>(density.size()) != grid.size()) throw GridMismatchError();
  for (std::size_t g = 1; g < grid.size(); ++g) {
    const double lo = density(g - 1), hi = density(g);
    if (!(lo >= 0.0) || !(hi >= 0.0)) throw NumericalError("density must be non-negative");
    cdf_[g] = cdf_[g - 1] + 0.5 * (lo + hi) * grid.dx();
  }
  const double total = cdf_.back();
  if (!(total > 0.0)) throw NumericalError("density integrates to zero");
  for (double& c : cdf_) c /= total;
}

double DensitySampler::draw(RandomStream& rng) const {
  const double u = rng.uniform();
  // first node with cdf > u; the cell before it carries the mass
  auto it = std::upper_bound(cdf_.begin() + 1, cdf_.end(), u);
  if (it == cdf_.end()) it = cdf_.end() - 1;
  const auto g = static_cast<std::size_t>(it - cdf_.begin());
  const double lo = cdf_[g - 1], hi = cdf_[g];
  const double frac = hi > lo ? (u - lo) / (hi - lo) : 0.5;
  return grid_.x(g - 1) + frac * grid_.dx();
}

std::vector<double> sample_positions(const Grid1D& grid, const Eigen::VectorXd& density,
                                     std::size_t count, RandomStream& rng) {
  DensitySampler sampler(grid, density);
  std::vector<double> out(count);
  for (auto& x : out) x = sampler.draw(rng);
  return out;
}

double ensemble_std(std::span<const double> positions) {
  if (positions.size() < 2) throw NumericalError("ensemble_std needs at least two positions");
  double mean = 0.0;
  for (double x : positions) mean += x;
  mean /= static_cast<double>(positions.size());
  double var = 0.0;
  for (double x : positions) var += (x - mean) * (x - mean);
  return std::sqrt(var / static_cast<double>(positions.size()));
}

}  // namespace tdqmc
