#include "trajattack/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

namespace trajattack {

namespace {

enum class Maneuver { Straight, Curve, LaneChange };

void check(const GenConfig& c) {
  if (c.count <= 0) throw std::invalid_argument("generator: count must be positive");
  if (c.past <= 0 || c.future <= 0) {
    throw std::invalid_argument("generator: horizons must be positive");
  }
  if (!(c.dt > 0.0)) throw std::invalid_argument("generator: dt must be positive");
  if (!(c.speed_min > 0.0) || c.speed_max < c.speed_min) {
    throw std::invalid_argument("generator: need 0 < speed_min <= speed_max");
  }
  if (c.turn_rate < 0.0 || c.lane_change_rate < 0.0 || c.turn_rate + c.lane_change_rate > 1.0) {
    throw std::invalid_argument("generator: maneuver rates must be in [0, 1] and sum to <= 1");
  }
  if (c.noise < 0.0 || c.accel_max < 0.0 || c.max_yaw_rate < 0.0) {
    throw std::invalid_argument("generator: amplitudes must be nonnegative");
  }
}

}  // namespace

double speed_noise_slack(const GenConfig& config) {
  // Each endpoint moves by at most noise * sqrt(2).
  return 2.0 * std::numbers::sqrt2 * config.noise / config.dt;
}

std::vector<Scenario> generate_synthetic_dataset(const GenConfig& config) {
  check(config);
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  const int n = config.past + 1 + config.future;
  const double horizon = (n - 1) * config.dt;
  std::vector<Scenario> out;
  out.reserve(static_cast<std::size_t>(config.count));

  for (int s = 0; s < config.count; ++s) {
    const double u = unit(rng);
    const Maneuver maneuver = u < config.lane_change_rate ? Maneuver::LaneChange
                              : u < config.lane_change_rate + config.turn_rate ? Maneuver::Curve
                                                                               : Maneuver::Straight;
    const Vec2 start(uniform(-100.0, 100.0), uniform(-100.0, 100.0));
    const double heading0 = uniform(0.0, 2.0 * std::numbers::pi);
    const double speed0 = uniform(config.speed_min, config.speed_max);
    const double accel = uniform(-config.accel_max, config.accel_max);
    const double yaw_rate = uniform(-config.max_yaw_rate, config.max_yaw_rate);

    // Lane change: heading bump sin(pi (t - t0) / D) over [t0, t0 + D] whose
    // integral moves the vehicle sideways by about one lane width.
    const double duration = std::min(uniform(3.0, 5.0), horizon);
    const double t0 = uniform(0.0, std::max(0.0, horizon - duration));
    const double side = unit(rng) < 0.5 ? -1.0 : 1.0;

    std::vector<Vec2> states(static_cast<std::size_t>(n));
    states[0] = start;
    for (int i = 0; i + 1 < n; ++i) {
      const double t = i * config.dt;
      const double speed = std::clamp(speed0 + accel * t, config.speed_min, config.speed_max);
      double heading = heading0;
      if (maneuver == Maneuver::Curve) {
        heading += yaw_rate * t;
      } else if (maneuver == Maneuver::LaneChange && t >= t0 && t <= t0 + duration) {
        const double peak = config.lane_width * std::numbers::pi / (2.0 * speed0 * duration);
        heading += side * peak * std::sin(std::numbers::pi * (t - t0) / duration);
      }
      const double step = speed * config.dt;
      states[i + 1] = states[i] + step * Vec2(std::cos(heading), std::sin(heading));
    }
    for (auto& p : states) {
      p += Vec2(uniform(-config.noise, config.noise), uniform(-config.noise, config.noise));
    }

    Trajectory full(states, config.dt);
    out.push_back(Scenario{fmt::format("syn-{:06d}", s),
                           full.slice(0, static_cast<std::size_t>(config.past + 1)),
                           full.slice(static_cast<std::size_t>(config.past + 1),
                                      static_cast<std::size_t>(config.future))});
  }
  return out;
}

}  // namespace trajattack
