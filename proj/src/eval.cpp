#include "trajattack/eval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>

#include "trajattack/errors.hpp"

namespace trajattack {

namespace {

template <class Row, class Getter>
double mean_of(const std::vector<Row>& rows, Getter get) {
  if (rows.empty()) return 0.0;
  double total = 0.0;
  for (const Row& r : rows) total += get(r);
  return total / static_cast<double>(rows.size());
}

std::vector<std::uint64_t> draw_seeds(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 master(seed);
  std::vector<std::uint64_t> seeds(count);
  for (auto& s : seeds) s = master();
  return seeds;
}

/// Runs job(i) for i in [0, count) on up to `threads` workers.
template <class Job>
void parallel_for(std::size_t count, int threads, Job job) {
  const std::size_t workers =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) job(i);
    });
  }
  for (auto& t : pool) t.join();
}

void check_targets(const std::vector<Scenario>& scenarios, const std::vector<Trajectory>& targets) {
  if (scenarios.size() != targets.size()) {
    throw std::invalid_argument("need exactly one target per scenario");
  }
}

}  // namespace

double mean_deviation(const Trajectory& a, const Trajectory& b) {
  if (a.size() != b.size()) {
    throw HorizonMismatch("trajectories of length " + std::to_string(a.size()) + " and " +
                          std::to_string(b.size()) + " cannot be compared");
  }
  double total = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) total += (a.state(m) - b.state(m)).norm();
  return total / static_cast<double>(a.size());
}

double MetricsReport::mean_j_acc_nom() const {
  return mean_of(rows, [](const ScenarioMetrics& r) { return r.j_acc_nom; });
}
double MetricsReport::mean_j_gy() const {
  return mean_of(rows, [](const ScenarioMetrics& r) { return r.j_gy; });
}
double MetricsReport::mean_j_bar() const {
  return mean_of(rows, [](const ScenarioMetrics& r) { return r.j_bar; });
}
double MetricsReport::mean_j_zero() const {
  return mean_of(rows, [](const ScenarioMetrics& r) { return r.j_zero; });
}
double MetricsReport::mean_wall_time() const {
  return mean_of(rows, [](const ScenarioMetrics& r) { return r.wall_time_s; });
}
double MetricsReport::median_j_bar() const {
  if (rows.empty()) return 0.0;
  std::vector<double> v;
  for (const auto& r : rows) v.push_back(r.j_bar);
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

AccuracyReport nominal_accuracy(const PredictorSpec& spec, const std::vector<Scenario>& scenarios) {
  AccuracyReport out;
  for (const Scenario& s : scenarios) {
    out.per_scenario.push_back(mean_deviation(predict(spec, s.past), s.future_truth));
  }
  out.mean = mean_of(out.per_scenario, [](double v) { return v; });
  return out;
}

AccuracyReport target_deviation(const std::vector<Scenario>& scenarios,
                                const std::vector<Trajectory>& targets) {
  check_targets(scenarios, targets);
  AccuracyReport out;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    out.per_scenario.push_back(mean_deviation(scenarios[i].future_truth, targets[i]));
  }
  out.mean = mean_of(out.per_scenario, [](double v) { return v; });
  return out;
}

MetricsReport attack_suite(const PredictorSpec& spec, const std::vector<Scenario>& scenarios,
                           const std::vector<Trajectory>& targets, const SuiteSetup& setup) {
  check_targets(scenarios, targets);
  validate(setup.attack);
  const auto seeds = draw_seeds(setup.attack.seed, scenarios.size());

  struct Outcome {
    std::optional<ScenarioMetrics> row;
    std::optional<AttackResult> result;
    std::string error;
  };
  std::vector<Outcome> outcomes(scenarios.size());

  parallel_for(scenarios.size(), setup.threads, [&](std::size_t i) {
    const Scenario& s = scenarios[i];
    Outcome& out = outcomes[i];
    try {
      ScenarioMetrics row;
      row.scenario_id = s.id;
      row.optimizer = std::string(to_string(setup.attack.optimizer));
      row.k_max = setup.attack.max_iterations;
      const Trajectory clean_prediction = predict(spec, s.past);
      row.j_acc_nom = mean_deviation(clean_prediction, s.future_truth);
      row.j_gy = mean_deviation(s.future_truth, targets[i]);
      row.j_zero = loss(clean_prediction, targets[i], setup.weights);

      AttackConfig cfg = setup.attack;
      cfg.seed = seeds[i];
      const auto start = std::chrono::steady_clock::now();
      const ConstraintSet cs(s.past, setup.bounds, setup.position_radius);
      AttackResult result = run_attack(spec, targets[i], cs, setup.weights, cfg);
      row.wall_time_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      row.j_bar = result.final_loss;
      row.iterations = result.iterations;
      out.row = std::move(row);
      out.result = std::move(result);
    } catch (const std::exception& e) {
      out.error = e.what();
    }
  });

  MetricsReport report;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].row) {
      report.rows.push_back(std::move(*outcomes[i].row));
      report.results.push_back(std::move(*outcomes[i].result));
    } else {
      report.failures.push_back({scenarios[i].id, outcomes[i].error});
    }
  }
  return report;
}

NoiseReport noise_robustness(const PredictorSpec& spec, const std::vector<Scenario>& scenarios,
                             const std::vector<Trajectory>& targets, const SuiteSetup& setup,
                             const NoiseConfig& nc) {
  NoiseReport report;
  report.attack = attack_suite(spec, scenarios, targets, setup);
  const auto seeds = draw_seeds(nc.seed, 2 * scenarios.size());

  std::size_t r = 0;
  for (std::size_t i = 0; i < scenarios.size() && r < report.attack.rows.size(); ++i) {
    if (report.attack.rows[r].scenario_id != scenarios[i].id) continue;  // failed scenario
    const Scenario& s = scenarios[i];
    const ScenarioMetrics& metrics = report.attack.rows[r];
    const AttackResult& result = report.attack.results[r];

    NoiseRow row;
    row.scenario_id = s.id;
    row.clean_j_acc = metrics.j_acc_nom;
    row.clean_j = metrics.j_zero;
    row.adversarial_j = result.final_loss;

    row.noisy_clean = perturb_with_noise(s.past, {nc.radius_factor, seeds[2 * i]});
    const Trajectory noisy_clean_pred = predict(spec, row.noisy_clean);
    row.noisy_clean_j_acc = mean_deviation(noisy_clean_pred, s.future_truth);
    row.noisy_clean_j = loss(noisy_clean_pred, targets[i], setup.weights);

    row.noisy_adversarial = perturb_with_noise(result.adversarial, {nc.radius_factor, seeds[2 * i + 1]});
    row.noisy_adversarial_j = loss(predict(spec, row.noisy_adversarial), targets[i], setup.weights);
    report.rows.push_back(std::move(row));
    ++r;
  }

  report.mean_clean_j_acc = mean_of(report.rows, [](const NoiseRow& x) { return x.clean_j_acc; });
  report.mean_clean_j = mean_of(report.rows, [](const NoiseRow& x) { return x.clean_j; });
  report.mean_noisy_clean_j_acc =
      mean_of(report.rows, [](const NoiseRow& x) { return x.noisy_clean_j_acc; });
  report.mean_noisy_clean_j = mean_of(report.rows, [](const NoiseRow& x) { return x.noisy_clean_j; });
  report.mean_adversarial_j = mean_of(report.rows, [](const NoiseRow& x) { return x.adversarial_j; });
  report.mean_noisy_adversarial_j =
      mean_of(report.rows, [](const NoiseRow& x) { return x.noisy_adversarial_j; });
  return report;
}

}  // namespace trajattack
