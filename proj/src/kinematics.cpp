#include "trajattack/kinematics.hpp"

#include <stdexcept>
#include <string>

namespace trajattack {

std::string_view to_string(Quantity q) {
  switch (q) {
    case Quantity::Speed: return "speed";
    case Quantity::AccelLon: return "accel_lon";
    case Quantity::AccelLat: return "accel_lat";
    case Quantity::JerkLon: return "jerk_lon";
    case Quantity::JerkLat: return "jerk_lat";
  }
  return "unknown";
}

Quantity quantity_from_string(std::string_view name) {
  for (Quantity q : kAllQuantities) {
    if (to_string(q) == name) return q;
  }
  throw std::invalid_argument("unknown kinematic quantity '" + std::string(name) + "'");
}

const std::vector<double>& KinematicProfile::values(Quantity q) const {
  switch (q) {
    case Quantity::Speed: return speed;
    case Quantity::AccelLon: return accel_lon;
    case Quantity::AccelLat: return accel_lat;
    case Quantity::JerkLon: return jerk_lon;
    case Quantity::JerkLat: return jerk_lat;
  }
  throw std::logic_error("bad quantity");
}

double step_speed(const Vec2& from, const Vec2& to, double dt) { return (to - from).norm() / dt; }

Vec2 frame_acceleration(const Vec2& prev, const Vec2& cur, const Vec2& next, double dt) {
  const Vec2 accel = (next - 2.0 * cur + prev) / (dt * dt);
  const Vec2 chord = next - prev;
  const double len = chord.norm();
  const Vec2 heading = len > 0.0 ? Vec2(chord / len) : Vec2(1.0, 0.0);
  const Vec2 left(-heading.y(), heading.x());
  return Vec2(accel.dot(heading), accel.dot(left));
}

KinematicProfile derive_kinematics(const Trajectory& traj) {
  const std::size_t n = traj.size();
  if (n < 2) throw std::invalid_argument("kinematics need at least two states");
  const double dt = traj.dt();

  KinematicProfile out;
  out.speed.reserve(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    out.speed.push_back(step_speed(traj.state(i), traj.state(i + 1), dt));
  }

  for (std::size_t i = 1; i + 1 < n; ++i) {
    const Vec2 a = frame_acceleration(traj.state(i - 1), traj.state(i), traj.state(i + 1), dt);
    out.accel_lon.push_back(a.x());
    out.accel_lat.push_back(a.y());
  }

  for (std::size_t j = 0; j + 1 < out.accel_lon.size(); ++j) {
    out.jerk_lon.push_back((out.accel_lon[j + 1] - out.accel_lon[j]) / dt);
    out.jerk_lat.push_back((out.accel_lat[j + 1] - out.accel_lat[j]) / dt);
  }
  return out;
}

std::vector<std::size_t> supporting_states(Quantity q, std::size_t index) {
  std::size_t width = 0;
  switch (q) {
    case Quantity::Speed: width = 2; break;
    case Quantity::AccelLon:
    case Quantity::AccelLat: width = 3; break;
    case Quantity::JerkLon:
    case Quantity::JerkLat: width = 4; break;
  }
  std::vector<std::size_t> states(width);
  for (std::size_t k = 0; k < width; ++k) states[k] = index + k;
  return states;
}

}  // namespace trajattack
