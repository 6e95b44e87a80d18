#include "trajattack/predictor.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "trajattack/errors.hpp"

namespace trajattack {

namespace {

void check_input(const PredictorSpec& spec, const Trajectory& past) {
  if (past.size() != static_cast<std::size_t>(spec.input_states())) {
    throw HorizonMismatch("predictor expects " + std::to_string(spec.input_states()) +
                          " past states (P=" + std::to_string(spec.past) + "), got " +
                          std::to_string(past.size()));
  }
}

/// P displacement vectors of the past, interleaved.
Eigen::VectorXd encode(const Trajectory& past) {
  const Eigen::Index n = static_cast<Eigen::Index>(past.size());
  const Eigen::VectorXd& c = past.coords();
  return c.segment(2, 2 * (n - 1)) - c.segment(0, 2 * (n - 1));
}

/// Accumulates displacement vectors from the anchor state.
Trajectory accumulate(const Vec2& anchor, const Eigen::VectorXd& displacements, double dt) {
  const Eigen::Index f = displacements.size() / 2;
  Eigen::VectorXd out(2 * f);
  Vec2 p = anchor;
  for (Eigen::Index k = 0; k < f; ++k) {
    p = p + displacements.segment<2>(2 * k);
    out.segment<2>(2 * k) = p;
  }
  return Trajectory(std::move(out), dt);
}

struct ForwardPass {
  std::vector<Eigen::VectorXd> activations;  // input, then every hidden layer output
  Eigen::VectorXd output;
};

ForwardPass mlp_forward(const PredictorSpec& spec, const Eigen::VectorXd& input) {
  ForwardPass pass;
  pass.activations.push_back(input);
  const std::size_t last = spec.layers.size() - 1;
  for (std::size_t l = 0; l < last; ++l) {
    const DenseLayer& layer = spec.layers[l];
    Eigen::VectorXd z = layer.weights * pass.activations.back() + layer.bias;
    pass.activations.push_back(z.array().tanh().matrix());
  }
  pass.output = spec.layers[last].weights * pass.activations.back() + spec.layers[last].bias;
  return pass;
}

Trajectory cv_predict(const PredictorSpec& spec, const Trajectory& past) {
  const Vec2 anchor = past.back();
  const Vec2 velocity = anchor - past.state(past.size() - 2);
  Eigen::VectorXd out(2 * spec.future);
  for (int k = 1; k <= spec.future; ++k) {
    out.segment<2>(2 * (k - 1)) = anchor + static_cast<double>(k) * velocity;
  }
  return Trajectory(std::move(out), past.dt());
}

}  // namespace

void validate(const PredictorSpec& spec) {
  if (spec.past < 1 || spec.future < 1) {
    throw std::invalid_argument("predictor horizons must be >= 1");
  }
  if (!(spec.dt_hint > 0.0)) throw std::invalid_argument("predictor dt_hint must be positive");
  if (spec.kind == PredictorKind::ConstantVelocity) {
    if (!spec.layers.empty()) {
      throw std::invalid_argument("constant-velocity predictor carries no layers");
    }
    return;
  }
  if (spec.layers.empty()) throw std::invalid_argument("mlp needs at least one layer");
  Eigen::Index width = 2 * spec.past;
  for (std::size_t l = 0; l < spec.layers.size(); ++l) {
    const DenseLayer& layer = spec.layers[l];
    const std::string where = "layer " + std::to_string(l);
    if (layer.weights.cols() != width) {
      throw std::invalid_argument(where + ": expected " + std::to_string(width) + " inputs");
    }
    if (layer.bias.size() != layer.weights.rows()) {
      throw std::invalid_argument(where + ": bias length differs from row count");
    }
    if (!layer.weights.allFinite() || !layer.bias.allFinite()) {
      throw std::invalid_argument(where + ": non-finite parameters");
    }
    width = layer.weights.rows();
  }
  if (width != 2 * spec.future) {
    throw std::invalid_argument("mlp output width must be 2F = " + std::to_string(2 * spec.future));
  }
}

PredictorSpec make_constant_velocity(int past, int future, double dt_hint) {
  PredictorSpec spec{PredictorKind::ConstantVelocity, past, future, dt_hint, {}};
  validate(spec);
  return spec;
}

PredictorSpec make_mlp(int past, int future, const std::vector<int>& hidden, std::uint64_t seed,
                       double dt_hint) {
  PredictorSpec spec{PredictorKind::Mlp, past, future, dt_hint, {}};
  std::mt19937_64 rng(seed);
  std::vector<int> widths;
  widths.push_back(2 * past);
  widths.insert(widths.end(), hidden.begin(), hidden.end());
  widths.push_back(2 * future);
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const int in = widths[l];
    const int out = widths[l + 1];
    if (out <= 0) throw std::invalid_argument("mlp layer widths must be positive");
    const double limit = std::sqrt(6.0 / (in + out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    DenseLayer layer{Eigen::MatrixXd(out, in), Eigen::VectorXd::Zero(out)};
    // Row-major fill so the draw order matches the serialized layout.
    for (int r = 0; r < out; ++r) {
      for (int c = 0; c < in; ++c) layer.weights(r, c) = dist(rng);
    }
    spec.layers.push_back(std::move(layer));
  }
  validate(spec);
  return spec;
}

Trajectory predict(const PredictorSpec& spec, const Trajectory& past) {
  check_input(spec, past);
  if (spec.kind == PredictorKind::ConstantVelocity) return cv_predict(spec, past);
  return accumulate(past.back(), mlp_forward(spec, encode(past)).output, past.dt());
}

PredictionWithGradient predict_with_gradient(const PredictorSpec& spec, const Trajectory& past) {
  check_input(spec, past);
  const Eigen::Index f = spec.future;
  const Eigen::Index n = spec.input_states();
  PredictionWithGradient out;
  out.jacobian = Eigen::MatrixXd::Zero(2 * f, 2 * n);

  if (spec.kind == PredictorKind::ConstantVelocity) {
    out.prediction = cv_predict(spec, past);
    for (Eigen::Index k = 1; k <= f; ++k) {
      const double kk = static_cast<double>(k);
      out.jacobian.block<2, 2>(2 * (k - 1), 2 * (n - 1)) = (1.0 + kk) * Eigen::Matrix2d::Identity();
      out.jacobian.block<2, 2>(2 * (k - 1), 2 * (n - 2)) = -kk * Eigen::Matrix2d::Identity();
    }
    return out;
  }

  const ForwardPass pass = mlp_forward(spec, encode(past));
  out.prediction = accumulate(past.back(), pass.output, past.dt());

  // d(encoding)/d(input): row block i is x_{i+1} - x_i.
  Eigen::MatrixXd chain = Eigen::MatrixXd::Zero(2 * (n - 1), 2 * n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    chain.block<2, 2>(2 * i, 2 * (i + 1)) = Eigen::Matrix2d::Identity();
    chain.block<2, 2>(2 * i, 2 * i) = -Eigen::Matrix2d::Identity();
  }
  const std::size_t last = spec.layers.size() - 1;
  for (std::size_t l = 0; l < last; ++l) {
    const Eigen::ArrayXd slope = 1.0 - pass.activations[l + 1].array().square();
    chain = slope.matrix().asDiagonal() * (spec.layers[l].weights * chain);
  }
  chain = spec.layers[last].weights * chain;  // d(displacements)/d(input)

  Eigen::MatrixXd running = Eigen::MatrixXd::Zero(2, 2 * n);
  running.block<2, 2>(0, 2 * (n - 1)) = Eigen::Matrix2d::Identity();
  for (Eigen::Index k = 0; k < f; ++k) {
    running += chain.middleRows(2 * k, 2);
    out.jacobian.middleRows(2 * k, 2) = running;
  }
  return out;
}

}  // namespace trajattack
