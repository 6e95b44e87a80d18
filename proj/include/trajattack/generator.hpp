#pragma once

#include <cstdint>
#include <vector>

#include "trajattack/trajectory.hpp"

namespace trajattack {

/// Parameters of the synthetic driving-scenario generator.
struct GenConfig {
  int count = 100;
  int past = 4;      // P; scenarios carry P + 1 past states
  int future = 12;   // F
  double dt = 0.5;
  double speed_min = 5.0;
  double speed_max = 15.0;
  double accel_max = 1.0;        // |longitudinal acceleration|, m/s^2
  double turn_rate = 0.3;        // fraction of gently curving scenarios
  double lane_change_rate = 0.3; // fraction of lane changes
  double max_yaw_rate = 0.1;     // rad/s for curves
  double lane_width = 3.5;
  double noise = 0.02;           // uniform position noise amplitude per axis, m
  std::uint64_t seed = 0;
};

/// Straight, curving and lane-change trajectories at speeds within
/// [speed_min, speed_max] before noise. Deterministic in config.seed.
std::vector<Scenario> generate_synthetic_dataset(const GenConfig& config);

/// Largest possible deviation of a derived speed from the noiseless speed
/// range given the configured noise amplitude.
double speed_noise_slack(const GenConfig& config);

}  // namespace trajattack
