#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include "trajattack/trajectory.hpp"

namespace trajattack {

/// Quantities derived from positions and bounded by the kinematic bands.
enum class Quantity { Speed = 0, AccelLon, AccelLat, JerkLon, JerkLat };

inline constexpr std::array<Quantity, 5> kAllQuantities = {
    Quantity::Speed, Quantity::AccelLon, Quantity::AccelLat, Quantity::JerkLon, Quantity::JerkLat};

std::string_view to_string(Quantity q);
Quantity quantity_from_string(std::string_view name);

/// Finite-difference kinematics of a trajectory.
///
/// speed[i] belongs to the transition i -> i+1. accel_*[j] belongs to interior
/// state j+1 and is resolved in the central-difference heading frame at that
/// state. jerk_*[j] is the first difference of accel_*[j], accel_*[j+1].
struct KinematicProfile {
  std::vector<double> speed;
  std::vector<double> accel_lon;
  std::vector<double> accel_lat;
  std::vector<double> jerk_lon;
  std::vector<double> jerk_lat;

  const std::vector<double>& values(Quantity q) const;
};

/// Single-sample building blocks of derive_kinematics.
double step_speed(const Vec2& from, const Vec2& to, double dt);
/// Longitudinal and lateral acceleration at `cur`.
Vec2 frame_acceleration(const Vec2& prev, const Vec2& cur, const Vec2& next, double dt);

/// Throws std::invalid_argument for trajectories with fewer than two states.
KinematicProfile derive_kinematics(const Trajectory& traj);

/// States whose positions enter entry `index` of quantity `q`, in order.
/// For speed: {i, i+1}; acceleration: {j, j+1, j+2}; jerk: {j, ..., j+3}.
std::vector<std::size_t> supporting_states(Quantity q, std::size_t index);

}  // namespace trajattack
