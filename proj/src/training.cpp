#include "trajattack/training.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "trajattack/adam.hpp"
#include "trajattack/dataset_io.hpp"
#include "trajattack/errors.hpp"

namespace trajattack {

namespace {

/// Column-per-sample view of a dataset.
struct Batch {
  Eigen::MatrixXd inputs;   // 2P x B displacement encodings
  Eigen::MatrixXd anchors;  // 2 x B last past states
  Eigen::MatrixXd truth;    // 2F x B future positions
};

Batch gather(const std::vector<Scenario>& data, const std::vector<std::size_t>& idx,
             std::size_t first, std::size_t count) {
  const auto& s0 = data[idx[first]];
  const Eigen::Index p = static_cast<Eigen::Index>(s0.horizon_past());
  const Eigen::Index f = static_cast<Eigen::Index>(s0.horizon_future());
  Batch b{Eigen::MatrixXd(2 * p, count), Eigen::MatrixXd(2, count), Eigen::MatrixXd(2 * f, count)};
  for (std::size_t j = 0; j < count; ++j) {
    const Scenario& s = data[idx[first + j]];
    const Eigen::VectorXd& c = s.past.coords();
    b.inputs.col(j) = c.segment(2, 2 * p) - c.segment(0, 2 * p);
    b.anchors.col(j) = s.past.back();
    b.truth.col(j) = s.future_truth.coords();
  }
  return b;
}

struct Forward {
  std::vector<Eigen::MatrixXd> activations;
  Eigen::MatrixXd positions;  // 2F x B
};

Forward forward(const PredictorSpec& spec, const Batch& batch) {
  Forward fw;
  fw.activations.push_back(batch.inputs);
  const std::size_t last = spec.layers.size() - 1;
  for (std::size_t l = 0; l < last; ++l) {
    Eigen::MatrixXd z = spec.layers[l].weights * fw.activations.back();
    z.colwise() += spec.layers[l].bias;
    fw.activations.push_back(z.array().tanh().matrix());
  }
  Eigen::MatrixXd disp = spec.layers[last].weights * fw.activations.back();
  disp.colwise() += spec.layers[last].bias;
  fw.positions = disp;
  fw.positions.topRows(2) += batch.anchors;
  for (Eigen::Index k = 1; k < disp.rows() / 2; ++k) {
    fw.positions.middleRows(2 * k, 2) += fw.positions.middleRows(2 * (k - 1), 2);
  }
  return fw;
}

double mse(const Eigen::MatrixXd& positions, const Eigen::MatrixXd& truth) {
  return (positions - truth).squaredNorm() / static_cast<double>(truth.size());
}

double ade(const Eigen::MatrixXd& positions, const Eigen::MatrixXd& truth) {
  double total = 0.0;
  const Eigen::Index f = truth.rows() / 2;
  for (Eigen::Index j = 0; j < truth.cols(); ++j) {
    for (Eigen::Index k = 0; k < f; ++k) {
      total += (positions.block<2, 1>(2 * k, j) - truth.block<2, 1>(2 * k, j)).norm();
    }
  }
  return total / static_cast<double>(f * truth.cols());
}

}  // namespace

TrainResult train_mlp(const std::vector<Scenario>& dataset, const TrainConfig& config) {
  if (dataset.empty()) throw std::invalid_argument("train_mlp: empty dataset");
  if (config.epochs < 0 || config.batch_size < 1 || !(config.learning_rate >= 0.0) ||
      config.validation_fraction < 0.0 || config.validation_fraction >= 1.0) {
    throw std::invalid_argument("train_mlp: invalid hyperparameters");
  }
  const auto [p, f] = uniform_horizons(dataset);

  TrainResult result;
  result.spec = make_mlp(static_cast<int>(p), static_cast<int>(f), config.hidden, config.seed,
                         dataset.front().past.dt());
  PredictorSpec& spec = result.spec;

  // Data-dependent scaling of the Glorot draw: displacements are several
  // meters per step, which would saturate tanh at the first layer.
  {
    std::vector<std::size_t> all(dataset.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    const Batch full = gather(dataset, all, 0, all.size());
    const double in_rms = std::sqrt(full.inputs.squaredNorm() / static_cast<double>(full.inputs.size()));
    Eigen::MatrixXd out_disp = full.truth;
    out_disp.topRows(2) -= full.anchors;
    for (Eigen::Index k = out_disp.rows() / 2 - 1; k > 0; --k) {
      out_disp.middleRows(2 * k, 2) -= full.truth.middleRows(2 * (k - 1), 2);
    }
    const double out_rms = std::sqrt(out_disp.squaredNorm() / static_cast<double>(out_disp.size()));
    if (in_rms > 0.0) spec.layers.front().weights /= in_rms;
    if (out_rms > 0.0) spec.layers.back().weights *= out_rms;
  }
  result.initial = spec;

  std::mt19937_64 rng(config.seed ^ 0x5deece66dULL);
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);

  std::size_t n_val = static_cast<std::size_t>(
      std::llround(config.validation_fraction * static_cast<double>(dataset.size())));
  if (dataset.size() < 2) n_val = 0;
  n_val = std::min(n_val, dataset.size() - 1);
  std::vector<std::size_t> train(order.begin(), order.end() - static_cast<long>(n_val));
  std::vector<std::size_t> val(order.end() - static_cast<long>(n_val), order.end());
  const Batch val_batch = n_val > 0 ? gather(dataset, val, 0, n_val) : Batch{};

  std::vector<Adam> weight_opt;
  std::vector<Adam> bias_opt;
  for (const DenseLayer& layer : spec.layers) {
    weight_opt.emplace_back(layer.weights.size());
    bias_opt.emplace_back(layer.bias.size());
  }

  const std::size_t batch_size = static_cast<std::size_t>(config.batch_size);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    // Cosine decay from the configured rate; a constant rate leaves Adam
    // jittering well above the fit floor.
    const double lr = config.learning_rate * 0.5 *
                      (1.0 + std::cos(std::numbers::pi * epoch / static_cast<double>(config.epochs)));
    std::shuffle(train.begin(), train.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t first = 0; first < train.size(); first += batch_size) {
      const std::size_t count = std::min(batch_size, train.size() - first);
      const Batch batch = gather(dataset, train, first, count);
      const Forward fw = forward(spec, batch);
      const double batch_loss = mse(fw.positions, batch.truth);
      if (!std::isfinite(batch_loss)) {
        throw Error(fmt::format("train_mlp: non-finite loss at epoch {} batch starting at {}",
                                epoch, first));
      }
      epoch_loss += batch_loss * static_cast<double>(count);

      // dL/dpositions, then reverse cumulative sum gives dL/ddisplacements.
      Eigen::MatrixXd delta =
          2.0 * (fw.positions - batch.truth) / static_cast<double>(batch.truth.size());
      for (Eigen::Index k = delta.rows() / 2 - 2; k >= 0; --k) {
        delta.middleRows(2 * k, 2) += delta.middleRows(2 * (k + 1), 2);
      }
      for (std::size_t l = spec.layers.size(); l-- > 0;) {
        DenseLayer& layer = spec.layers[l];
        Eigen::MatrixXd grad_w = delta * fw.activations[l].transpose();
        Eigen::VectorXd grad_b = delta.rowwise().sum();
        if (l > 0) {
          delta = (layer.weights.transpose() * delta).cwiseProduct(
              (1.0 - fw.activations[l].array().square()).matrix());
        }
        weight_opt[l].step(Eigen::Map<Eigen::VectorXd>(layer.weights.data(), layer.weights.size()),
                           Eigen::Map<const Eigen::VectorXd>(grad_w.data(), grad_w.size()),
                           lr);
        bias_opt[l].step(layer.bias, grad_b, lr);
      }
    }

    EpochStats stats;
    stats.epoch = epoch + 1;
    stats.train_mse = epoch_loss / static_cast<double>(train.size());
    if (n_val > 0) {
      const Forward fw = forward(spec, val_batch);
      stats.validation_mse = mse(fw.positions, val_batch.truth);
      stats.validation_ade = ade(fw.positions, val_batch.truth);
    }
    if (!std::isfinite(stats.train_mse) || !std::isfinite(stats.validation_mse)) {
      throw Error(fmt::format("train_mlp: non-finite loss after epoch {}", epoch + 1));
    }
    result.curve.push_back(stats);
  }
  validate(spec);
  return result;
}

double average_displacement_error(const PredictorSpec& spec, const std::vector<Scenario>& data) {
  if (data.empty()) throw std::invalid_argument("average_displacement_error: empty dataset");
  double total = 0.0;
  std::size_t count = 0;
  for (const Scenario& s : data) {
    const Trajectory pred = predict(spec, s.past);
    if (pred.size() != s.future_truth.size()) throw HorizonMismatch("future horizon mismatch");
    for (std::size_t k = 0; k < pred.size(); ++k) {
      total += (pred.state(k) - s.future_truth.state(k)).norm();
      ++count;
    }
  }
  return total / static_cast<double>(count);
}

}  // namespace trajattack
