#pragma once

#include <string>
#include <vector>

#include "trajattack/attack.hpp"
#include "trajattack/constraints.hpp"
#include "trajattack/noise.hpp"
#include "trajattack/predictor.hpp"
#include "trajattack/weights.hpp"

namespace trajattack {

/// sum_m ||a_m - b_m|| / F
double mean_deviation(const Trajectory& a, const Trajectory& b);

struct ScenarioMetrics {
  std::string scenario_id;
  double j_acc_nom = 0.0;
  double j_gy = 0.0;
  double j_bar = 0.0;      // best loss seen during the attack
  double j_zero = 0.0;     // loss of the unperturbed input
  int iterations = 0;
  double wall_time_s = 0.0;
  std::string optimizer;
  int k_max = 0;
};

struct SuiteFailure {
  std::string scenario_id;
  std::string message;
};

struct MetricsReport {
  std::vector<ScenarioMetrics> rows;
  std::vector<SuiteFailure> failures;
  std::vector<AttackResult> results;  // parallel to rows

  double mean_j_acc_nom() const;
  double mean_j_gy() const;
  double mean_j_bar() const;
  double mean_j_zero() const;
  double mean_wall_time() const;
  double median_j_bar() const;
};

struct AccuracyReport {
  std::vector<double> per_scenario;
  double mean = 0.0;
};

/// J_acc^nom per scenario and averaged. Throws HorizonMismatch.
AccuracyReport nominal_accuracy(const PredictorSpec& spec, const std::vector<Scenario>& scenarios);

/// J_{G-Y} per scenario and averaged.
AccuracyReport target_deviation(const std::vector<Scenario>& scenarios,
                                const std::vector<Trajectory>& targets);

/// Shared inputs of a suite run. Each scenario gets its own ConstraintSet
/// anchored at its past trajectory.
struct SuiteSetup {
  KinematicBounds bounds;
  double position_radius = 1.0;
  WeightScheme weights;
  AttackConfig attack;
  int threads = 1;
};

/// Runs the attack on every scenario. Scenario i uses the i-th seed drawn
/// from a generator seeded with setup.attack.seed, so results do not depend
/// on the thread count. Per-scenario errors are collected, not rethrown.
MetricsReport attack_suite(const PredictorSpec& spec, const std::vector<Scenario>& scenarios,
                           const std::vector<Trajectory>& targets, const SuiteSetup& setup);

struct NoiseRow {
  std::string scenario_id;
  Trajectory noisy_clean;
  Trajectory noisy_adversarial;
  double clean_j_acc = 0.0;        // accuracy on the clean input
  double clean_j = 0.0;            // loss of the clean input vs target
  double noisy_clean_j_acc = 0.0;
  double noisy_clean_j = 0.0;
  double adversarial_j = 0.0;      // attack's best loss
  double noisy_adversarial_j = 0.0;
};

struct NoiseReport {
  std::vector<NoiseRow> rows;
  MetricsReport attack;
  double mean_clean_j_acc = 0.0;
  double mean_clean_j = 0.0;
  double mean_noisy_clean_j_acc = 0.0;
  double mean_noisy_clean_j = 0.0;
  double mean_adversarial_j = 0.0;
  double mean_noisy_adversarial_j = 0.0;
};

/// Random-noise protocols on clean and on adversarial inputs, alongside the
/// noiseless baselines. Noise seeds are drawn per scenario from nc.seed.
NoiseReport noise_robustness(const PredictorSpec& spec, const std::vector<Scenario>& scenarios,
                             const std::vector<Trajectory>& targets, const SuiteSetup& setup,
                             const NoiseConfig& nc);

}  // namespace trajattack
