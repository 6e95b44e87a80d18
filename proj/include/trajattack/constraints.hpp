#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trajattack/kinematics.hpp"
#include "trajattack/trajectory.hpp"

namespace trajattack {

/// Numerical slack added to every bound, in the bounded quantity's units.
inline constexpr double kFeasibilitySlack = 1e-9;

struct QuantityBound {
  double mean = 0.0;
  double stddev = 0.0;
  double multiplier = 3.0;
  bool enabled = true;
  std::size_t samples = 0;

  double lower() const { return mean - multiplier * stddev; }
  double upper() const { return mean + multiplier * stddev; }
};

/// mean +/- k * stddev bands for every derived kinematic quantity.
struct KinematicBounds {
  std::array<QuantityBound, 5> quantities{};
  /// When false only the upper end of each band is enforced.
  bool two_sided = true;

  QuantityBound& operator[](Quantity q) { return quantities[static_cast<std::size_t>(q)]; }
  const QuantityBound& operator[](Quantity q) const {
    return quantities[static_cast<std::size_t>(q)];
  }
};

/// Population statistics pooled over every full (past + future) trajectory.
/// Quantities without samples are disabled.
KinematicBounds compute_bounds(const std::vector<Scenario>& dataset, double multiplier = 3.0);

nlohmann::json bounds_to_json(const KinematicBounds& bounds);
KinematicBounds bounds_from_json(const nlohmann::json& doc);

/// Enforced interval for one quantity after any widening for the nominal.
struct Band {
  double lower = 0.0;
  double upper = 0.0;
  bool enabled = false;
  bool lower_enforced = true;
};

/// Widening applied at construction so the nominal satisfies its own bands.
struct BandAdjustment {
  Quantity quantity;
  double old_lower, old_upper;
  double new_lower, new_upper;
};

enum class ConstraintKind { Position, Speed, AccelLon, AccelLat, JerkLon, JerkLat };
std::string_view to_string(ConstraintKind kind);

struct Violation {
  std::size_t state = 0;      // state the violation is attributed to
  ConstraintKind constraint = ConstraintKind::Position;
  std::size_t entry = 0;      // index into the violated quantity (== state for position)
  double amount = 0.0;        // excess beyond the bound, in the quantity's units
  double normalized = 0.0;    // amount relative to the allowed half-width
};

struct FeasibilityReport {
  std::vector<Violation> violations;

  bool feasible() const { return violations.empty(); }
  /// Violation with the largest normalized excess; nullopt when feasible.
  std::optional<Violation> worst() const;
};

/// Permissible set for the perturbed version of one nominal trajectory: every
/// state within position_radius of its nominal position and every derived
/// kinematic quantity inside its band.
class ConstraintSet {
 public:
  ConstraintSet(Trajectory nominal, const KinematicBounds& bounds, double position_radius = 1.0);

  const Trajectory& nominal() const { return nominal_; }
  double position_radius() const { return radius_; }
  const KinematicBounds& bounds() const { return bounds_; }
  const Band& band(Quantity q) const { return bands_[static_cast<std::size_t>(q)]; }
  const std::vector<BandAdjustment>& adjustments() const { return adjustments_; }

 private:
  Trajectory nominal_;
  KinematicBounds bounds_;
  double radius_;
  std::array<Band, 5> bands_{};
  std::vector<BandAdjustment> adjustments_;
};

/// Lists every violated constraint. Violations of coupled kinematic
/// quantities are attributed to the supporting state that deviates most from
/// the nominal. Throws std::invalid_argument on length or dt mismatch.
FeasibilityReport check_feasibility(const ConstraintSet& cs, const Trajectory& candidate);

inline bool is_feasible(const ConstraintSet& cs, const Trajectory& candidate) {
  return check_feasibility(cs, candidate).feasible();
}

nlohmann::json report_to_json(const FeasibilityReport& report);

}  // namespace trajattack
