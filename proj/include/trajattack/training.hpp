#pragma once

#include <cstdint>
#include <vector>

#include "trajattack/predictor.hpp"

namespace trajattack {

struct TrainConfig {
  std::vector<int> hidden = {64, 64};
  double learning_rate = 1e-3;  // peak; cosine-decayed to 0 over the epochs
  int epochs = 200;
  int batch_size = 32;
  double validation_fraction = 0.1;
  std::uint64_t seed = 0;
};

struct EpochStats {
  int epoch = 0;
  double train_mse = 0.0;
  double validation_mse = 0.0;
  double validation_ade = 0.0;  // mean per-state displacement error, m
};

struct TrainResult {
  PredictorSpec spec;
  PredictorSpec initial;  // weights before the first update
  std::vector<EpochStats> curve;
};

/// Minimizes mean squared position error of an MLP predictor with Adam.
/// The Glorot initialization is rescaled by the RMS input and output
/// displacement of the dataset so the first tanh layer starts unsaturated.
/// The last validation_fraction of the (seed-shuffled) dataset is held out.
/// Throws on empty data, non-uniform horizons, or a non-finite loss.
TrainResult train_mlp(const std::vector<Scenario>& dataset, const TrainConfig& config);

/// Mean over scenarios and future states of the Euclidean prediction error.
double average_displacement_error(const PredictorSpec& spec, const std::vector<Scenario>& data);

}  // namespace trajattack
