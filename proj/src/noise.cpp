#include "trajattack/noise.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace trajattack {

double mean_step_length(const Trajectory& traj) {
  if (traj.size() < 2) throw std::invalid_argument("mean step length needs >= 2 states");
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
    total += (traj.state(i + 1) - traj.state(i)).norm();
  }
  return total / static_cast<double>(traj.size() - 1);
}

Trajectory perturb_with_noise(const Trajectory& traj, const NoiseConfig& nc) {
  if (!(nc.radius_factor >= 0.0)) throw std::invalid_argument("noise radius factor must be >= 0");
  if (nc.radius_factor == 0.0) return traj;
  const double radius = nc.radius_factor * mean_step_length(traj);
  std::mt19937_64 rng(nc.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd coords = traj.coords();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    // sqrt of a uniform draw makes the point uniform over the disc's area.
    const double r = radius * std::sqrt(unit(rng));
    const double angle = 2.0 * std::numbers::pi * unit(rng);
    coords.segment<2>(2 * static_cast<Eigen::Index>(i)) += r * Vec2(std::cos(angle), std::sin(angle));
  }
  return Trajectory(std::move(coords), traj.dt());
}

}  // namespace trajattack
