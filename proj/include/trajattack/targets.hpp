#pragma once

#include <map>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "trajattack/trajectory.hpp"

namespace trajattack {

/// Every future state moved by `distance` along the left normal of the
/// heading from the last past state to the first future state.
struct LateralShift {
  double distance = 1.0;
};

/// Displacements from the last past state scaled by `factor`.
struct Speedup {
  double factor = 1.5;
};

/// Explicit target trajectories keyed by scenario id.
struct CustomTargets {
  std::map<std::string, Trajectory> by_id;
};

using TargetSpec = std::variant<LateralShift, Speedup, CustomTargets>;

/// Target Y for one scenario; length F. Throws Error if a custom target is
/// missing or has the wrong length.
Trajectory make_target(const TargetSpec& spec, const Scenario& scenario);

TargetSpec target_spec_from_json(const nlohmann::json& doc);
nlohmann::json target_spec_to_json(const TargetSpec& spec);

}  // namespace trajattack
