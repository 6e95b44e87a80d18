#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "trajattack/constraints.hpp"
#include "trajattack/predictor.hpp"
#include "trajattack/trajectory.hpp"
#include "trajattack/weights.hpp"

namespace trajattack {

/// Default node budget for the exact refinement in project_line_search.
inline constexpr long kProjectionSearchBudget = 200000;

enum class OptimizerKind { GradientDescent, Adam };
enum class StepSchedule { Constant, InverseSqrt };
enum class InitKind { Zero, Random };

std::string_view to_string(OptimizerKind kind);
std::string_view to_string(StepSchedule schedule);
std::string_view to_string(InitKind kind);
OptimizerKind optimizer_from_string(std::string_view name);
StepSchedule schedule_from_string(std::string_view name);
InitKind init_from_string(std::string_view name);

struct AttackConfig {
  OptimizerKind optimizer = OptimizerKind::Adam;
  double initial_step = 0.05;  // epsilon_0, m
  /// Defaults: Constant for Adam, InverseSqrt (eps_0 / sqrt(k + 1)) for
  /// gradient descent.
  std::optional<StepSchedule> schedule;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  double tau = 0.02;         // stop once J <= tau, m
  int max_iterations = 100;  // K_max
  InitKind init = InitKind::Random;
  double init_scale = 0.01;  // stddev of the Gaussian initial perturbation, m
  int projection_grid = 100; // G, theta resolution 1/G
  /// Branch-and-bound nodes per projection; smaller than the standalone
  /// default because a run may project on every update.
  long projection_budget = 20000;
  std::uint64_t seed = 0;

  StepSchedule resolved_schedule() const;
  double step_size(int k) const;
};

/// Throws std::invalid_argument on a non-positive step, negative tau,
/// K_max < 1, or G < 1.
void validate(const AttackConfig& cfg);

nlohmann::json config_to_json(const AttackConfig& cfg);

struct AttackResult {
  Trajectory adversarial;    // nominal + perturbation, bit-exact
  Perturbation perturbation; // best iterate
  std::vector<double> loss_trace;  // J after each update
  double initial_loss = 0.0;       // J(Delta^0)
  double final_loss = 0.0;         // best J seen, attained by `adversarial`
  double last_loss = 0.0;          // J of the last iterate
  int iterations = 0;              // updates performed, == loss_trace.size()
  int best_iteration = 0;          // 0 means Delta^0
  std::vector<int> projection_events;  // 1-based update indices that were projected
  FeasibilityReport feasibility;
  StepSchedule schedule = StepSchedule::Constant;
};

nlohmann::json result_to_json(const AttackResult& result);

/// Weighted sum of Euclidean distances between corresponding states.
double loss(const Trajectory& prediction, const Trajectory& target, const WeightScheme& weights);

struct LossAndGradient {
  double loss = 0.0;
  Trajectory prediction;
  Eigen::VectorXd gradient;  // dJ/dDelta, interleaved like Trajectory::coords
};

/// J(Delta) and its exact gradient via the predictor Jacobian. Terms whose
/// residual norm is below 1e-12 contribute a zero subgradient.
LossAndGradient loss_gradient(const PredictorSpec& spec, const Trajectory& nominal,
                              const Perturbation& delta, const Trajectory& target,
                              const WeightScheme& weights);

/// Per-state scaling theta on the grid {0, 1/G, ..., 1} that makes
/// nominal + theta o delta feasible. Starts with a largest-violation-first
/// line search, raises any theta_n that can be raised without losing
/// feasibility, then runs a depth-first branch and bound for a larger
/// sum(theta) that stops after `search_budget` nodes (0 disables it). Throws
/// std::invalid_argument for G < 1.
std::vector<double> project_line_search(const ConstraintSet& cs, const Perturbation& delta,
                                        int grid, long search_budget = kProjectionSearchBudget);

/// theta o delta, one scalar per state applied to both coordinates.
Perturbation scale(const Perturbation& delta, const std::vector<double>& theta);

/// Projected first-order attack. The nominal input is cs.nominal().
/// Terminates after max_iterations updates or once J <= tau. Throws
/// std::invalid_argument on shape mismatch or infeasible nominal, Error on a
/// non-finite loss.
AttackResult run_attack(const PredictorSpec& spec, const Trajectory& target,
                        const ConstraintSet& cs, const WeightScheme& weights,
                        const AttackConfig& cfg);

}  // namespace trajattack
