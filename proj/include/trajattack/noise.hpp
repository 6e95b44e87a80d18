#pragma once

#include <cstdint>

#include "trajattack/trajectory.hpp"

namespace trajattack {

struct NoiseConfig {
  double radius_factor = 0.02;
  std::uint64_t seed = 0;
};

/// Mean distance between consecutive waypoints.
double mean_step_length(const Trajectory& traj);

/// Every waypoint redrawn uniformly from the disc of radius
/// radius_factor * mean_step_length(traj) around it.
Trajectory perturb_with_noise(const Trajectory& traj, const NoiseConfig& nc);

}  // namespace trajattack
