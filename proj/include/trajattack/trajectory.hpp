#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <string>
#include <vector>

namespace trajattack {

using Vec2 = Eigen::Vector2d;

/// Uniformly sampled sequence of planar positions.
///
/// Coordinates are stored interleaved as [x0, y0, x1, y1, ...] so that a
/// trajectory can be used directly as an optimization variable or as the
/// row/column space of a Jacobian.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(const std::vector<Vec2>& states, double dt);
  Trajectory(Eigen::VectorXd coords, double dt);

  std::size_t size() const { return static_cast<std::size_t>(coords_.size() / 2); }
  double dt() const { return dt_; }
  Vec2 state(std::size_t i) const { return coords_.segment<2>(2 * static_cast<Eigen::Index>(i)); }
  Vec2 front() const { return state(0); }
  Vec2 back() const { return state(size() - 1); }
  const Eigen::VectorXd& coords() const { return coords_; }
  std::vector<Vec2> states() const;

  /// Copy of states [first, first + count).
  Trajectory slice(std::size_t first, std::size_t count) const;

  bool operator==(const Trajectory& other) const;

 private:
  Eigen::VectorXd coords_;
  double dt_ = 0.0;
};

/// Per-state displacement applied to a nominal past trajectory.
struct Perturbation {
  Eigen::VectorXd coords;

  static Perturbation zeros(std::size_t states) {
    return {Eigen::VectorXd::Zero(2 * static_cast<Eigen::Index>(states))};
  }
  std::size_t size() const { return static_cast<std::size_t>(coords.size() / 2); }
  Vec2 state(std::size_t i) const { return coords.segment<2>(2 * static_cast<Eigen::Index>(i)); }
};

/// nominal + delta, statewise.
Trajectory apply(const Trajectory& nominal, const Perturbation& delta);

/// Replaces delta by the exact difference (nominal + delta) - nominal, so that
/// apply(nominal, result) - nominal reproduces result bit for bit.
Perturbation canonicalize(const Trajectory& nominal, const Perturbation& delta);

/// Past observations plus the ground-truth continuation for one test case.
struct Scenario {
  std::string id;
  Trajectory past;
  Trajectory future_truth;

  /// Number of past steps; past holds horizon_past() + 1 states.
  std::size_t horizon_past() const { return past.size() - 1; }
  std::size_t horizon_future() const { return future_truth.size(); }
};

/// Validates the cross-field invariants of a Scenario; throws on violation.
void validate(const Scenario& scenario);

}  // namespace trajattack
