#include "trajattack/attack.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

#include "trajattack/adam.hpp"
#include "trajattack/errors.hpp"

namespace trajattack {

std::string_view to_string(OptimizerKind kind) {
  return kind == OptimizerKind::Adam ? "adam" : "gradient_descent";
}
std::string_view to_string(StepSchedule schedule) {
  return schedule == StepSchedule::Constant ? "constant" : "inverse_sqrt";
}
std::string_view to_string(InitKind kind) { return kind == InitKind::Zero ? "zero" : "random"; }

OptimizerKind optimizer_from_string(std::string_view name) {
  if (name == "adam") return OptimizerKind::Adam;
  if (name == "gradient_descent" || name == "gd") return OptimizerKind::GradientDescent;
  throw std::invalid_argument("unknown optimizer '" + std::string(name) + "'");
}
StepSchedule schedule_from_string(std::string_view name) {
  if (name == "constant") return StepSchedule::Constant;
  if (name == "inverse_sqrt") return StepSchedule::InverseSqrt;
  throw std::invalid_argument("unknown step schedule '" + std::string(name) + "'");
}
InitKind init_from_string(std::string_view name) {
  if (name == "zero") return InitKind::Zero;
  if (name == "random") return InitKind::Random;
  throw std::invalid_argument("unknown init '" + std::string(name) + "'");
}

StepSchedule AttackConfig::resolved_schedule() const {
  if (schedule) return *schedule;
  return optimizer == OptimizerKind::Adam ? StepSchedule::Constant : StepSchedule::InverseSqrt;
}

double AttackConfig::step_size(int k) const {
  return resolved_schedule() == StepSchedule::Constant
             ? initial_step
             : initial_step / std::sqrt(static_cast<double>(k) + 1.0);
}

void validate(const AttackConfig& cfg) {
  if (!(cfg.initial_step > 0.0)) throw std::invalid_argument("initial step must be > 0");
  if (!(cfg.tau >= 0.0)) throw std::invalid_argument("tau must be >= 0");
  if (cfg.max_iterations < 1) throw std::invalid_argument("K_max must be >= 1");
  if (cfg.projection_grid < 1) throw std::invalid_argument("projection grid must be >= 1");
  if (cfg.projection_budget < 0) throw std::invalid_argument("projection budget must be >= 0");
  if (!(cfg.init_scale >= 0.0)) throw std::invalid_argument("init scale must be >= 0");
}

nlohmann::json config_to_json(const AttackConfig& cfg) {
  return {{"optimizer", to_string(cfg.optimizer)},
          {"initial_step", cfg.initial_step},
          {"schedule", to_string(cfg.resolved_schedule())},
          {"beta1", cfg.beta1},
          {"beta2", cfg.beta2},
          {"adam_epsilon", cfg.adam_epsilon},
          {"tau", cfg.tau},
          {"K_max", cfg.max_iterations},
          {"init", to_string(cfg.init)},
          {"init_scale", cfg.init_scale},
          {"projection_grid", cfg.projection_grid},
          {"projection_budget", cfg.projection_budget},
          {"seed", cfg.seed}};
}

nlohmann::json result_to_json(const AttackResult& r) {
  auto states = [](const Eigen::VectorXd& c) {
    nlohmann::json arr = nlohmann::json::array();
    for (Eigen::Index i = 0; i < c.size() / 2; ++i) arr.push_back({c[2 * i], c[2 * i + 1]});
    return arr;
  };
  return {{"adversarial", states(r.adversarial.coords())},
          {"perturbation", states(r.perturbation.coords)},
          {"loss_trace", r.loss_trace},
          {"initial_loss", r.initial_loss},
          {"final_loss", r.final_loss},
          {"last_loss", r.last_loss},
          {"iterations", r.iterations},
          {"best_iteration", r.best_iteration},
          {"projection_events", r.projection_events},
          {"schedule", to_string(r.schedule)},
          {"feasibility", report_to_json(r.feasibility)}};
}

double loss(const Trajectory& prediction, const Trajectory& target, const WeightScheme& weights) {
  if (prediction.size() != target.size() || weights.weights.size() != target.size()) {
    throw std::invalid_argument("loss: prediction, target and weights must have equal length");
  }
  double total = 0.0;
  for (std::size_t m = 0; m < target.size(); ++m) {
    total += weights.weights[m] * (prediction.state(m) - target.state(m)).norm();
  }
  return total;
}

LossAndGradient loss_gradient(const PredictorSpec& spec, const Trajectory& nominal,
                              const Perturbation& delta, const Trajectory& target,
                              const WeightScheme& weights) {
  const PredictionWithGradient pg = predict_with_gradient(spec, apply(nominal, delta));
  LossAndGradient out;
  out.loss = loss(pg.prediction, target, weights);
  Eigen::VectorXd outer = Eigen::VectorXd::Zero(pg.jacobian.rows());
  for (std::size_t m = 0; m < target.size(); ++m) {
    const Vec2 residual = pg.prediction.state(m) - target.state(m);
    const double norm = residual.norm();
    if (norm >= 1e-12) {
      outer.segment<2>(2 * static_cast<Eigen::Index>(m)) = weights.weights[m] * residual / norm;
    }
  }
  out.gradient = pg.jacobian.transpose() * outer;
  out.prediction = pg.prediction;
  return out;
}

namespace {

/// Projects until the canonicalized iterate is feasible. Returns true if any
/// projection was applied.
bool make_feasible(const ConstraintSet& cs, Perturbation& delta, int grid, long budget) {
  bool projected = false;
  delta = canonicalize(cs.nominal(), delta);
  while (!is_feasible(cs, apply(cs.nominal(), delta))) {
    delta = canonicalize(cs.nominal(), scale(delta, project_line_search(cs, delta, grid, budget)));
    projected = true;
  }
  return projected;
}

}  // namespace

AttackResult run_attack(const PredictorSpec& spec, const Trajectory& target,
                        const ConstraintSet& cs, const WeightScheme& weights,
                        const AttackConfig& cfg) {
  validate(cfg);
  const Trajectory& nominal = cs.nominal();
  if (nominal.size() != static_cast<std::size_t>(spec.input_states())) {
    throw HorizonMismatch(fmt::format("attack: predictor expects {} past states, nominal has {}",
                                      spec.input_states(), nominal.size()));
  }
  if (target.size() != static_cast<std::size_t>(spec.future)) {
    throw HorizonMismatch(fmt::format("attack: predictor forecasts {} states, target has {}",
                                      spec.future, target.size()));
  }
  if (!is_feasible(cs, nominal)) throw std::invalid_argument("attack: nominal is infeasible");

  AttackResult result;
  result.schedule = cfg.resolved_schedule();

  Perturbation delta = Perturbation::zeros(nominal.size());
  if (cfg.init == InitKind::Random && cfg.init_scale > 0.0) {
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, cfg.init_scale);
    for (Eigen::Index i = 0; i < delta.coords.size(); ++i) delta.coords[i] = gauss(rng);
  }
  make_feasible(cs, delta, cfg.projection_grid, cfg.projection_budget);

  auto evaluate = [&](const Perturbation& d) {
    LossAndGradient lg = loss_gradient(spec, nominal, d, target, weights);
    if (!std::isfinite(lg.loss) || !lg.gradient.allFinite()) {
      throw Error("attack: non-finite loss or gradient");
    }
    return lg;
  };

  LossAndGradient current = evaluate(delta);
  result.initial_loss = current.loss;
  double best_loss = current.loss;
  Perturbation best = delta;

  Adam adam(delta.coords.size(), Adam::Options{cfg.beta1, cfg.beta2, cfg.adam_epsilon});
  for (int k = 0; k < cfg.max_iterations && current.loss > cfg.tau; ++k) {
    const double step = cfg.step_size(k);
    Perturbation update = delta;
    if (cfg.optimizer == OptimizerKind::Adam) {
      adam.step(update.coords, current.gradient, step);
    } else {
      update.coords -= step * current.gradient;
    }
    if (make_feasible(cs, update, cfg.projection_grid, cfg.projection_budget)) {
      result.projection_events.push_back(k + 1);
    }
    delta = std::move(update);
    current = evaluate(delta);
    result.loss_trace.push_back(current.loss);
    ++result.iterations;
    if (current.loss < best_loss) {
      best_loss = current.loss;
      best = delta;
      result.best_iteration = k + 1;
    }
  }

  result.last_loss = current.loss;
  result.final_loss = best_loss;
  result.perturbation = best;
  result.adversarial = apply(nominal, best);
  result.feasibility = check_feasibility(cs, result.adversarial);
  if (!result.feasibility.feasible()) {
    throw std::logic_error("attack produced an infeasible trajectory");
  }
  return result;
}

}  // namespace trajattack
