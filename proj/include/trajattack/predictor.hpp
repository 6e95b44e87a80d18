#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "trajattack/trajectory.hpp"

namespace trajattack {

enum class PredictorKind { ConstantVelocity, Mlp };

/// Fully connected layer: out = weights * in + bias.
struct DenseLayer {
  Eigen::MatrixXd weights;  // rows = outputs, cols = inputs
  Eigen::VectorXd bias;

  bool operator==(const DenseLayer& other) const {
    return weights == other.weights && bias == other.bias;
  }
};

/// A trajectory predictor f mapping P + 1 past states to F future states.
///
/// The MLP consumes the P displacement vectors of the past and emits F
/// displacement vectors that are accumulated from the last observed state.
/// Hidden layers use tanh, the output layer is linear.
struct PredictorSpec {
  PredictorKind kind = PredictorKind::ConstantVelocity;
  int past = 1;    // P
  int future = 1;  // F
  double dt_hint = 0.5;
  std::vector<DenseLayer> layers;

  int input_states() const { return past + 1; }
  bool operator==(const PredictorSpec& other) const = default;
};

/// Throws std::invalid_argument if horizons or layer shapes are inconsistent
/// or weights are not finite.
void validate(const PredictorSpec& spec);

PredictorSpec make_constant_velocity(int past, int future, double dt_hint = 0.5);

/// Glorot-uniform initialized network with the given hidden widths.
PredictorSpec make_mlp(int past, int future, const std::vector<int>& hidden, std::uint64_t seed,
                       double dt_hint = 0.5);

struct PredictionWithGradient {
  Trajectory prediction;
  Eigen::MatrixXd jacobian;  // (2F) x (2(P+1)), d prediction coords / d input coords
};

/// Throws HorizonMismatch when past.size() != P + 1.
Trajectory predict(const PredictorSpec& spec, const Trajectory& past);

/// Same prediction as predict() plus its exact input Jacobian.
PredictionWithGradient predict_with_gradient(const PredictorSpec& spec, const Trajectory& past);

}  // namespace trajattack
