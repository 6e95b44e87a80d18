#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "trajattack/errors.hpp"
#include "trajattack/generator.hpp"
#include "trajattack/oracle/oracle.hpp"
#include "trajattack/predictor.hpp"
#include "trajattack/predictor_io.hpp"
#include "trajattack/training.hpp"

using namespace trajattack;

namespace {

Trajectory random_past(std::mt19937_64& rng, int states, double dt = 0.5) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Vec2> pts(static_cast<std::size_t>(states));
  Vec2 p(10.0 * g(rng), 10.0 * g(rng));
  const Vec2 v(3.0 * g(rng), 3.0 * g(rng));
  for (auto& s : pts) {
    s = p + 0.3 * Vec2(g(rng), g(rng));
    p += v;
  }
  return Trajectory(pts, dt);
}

/// Weight pattern shared with tests/scripts/mlp_forward_oracle.py.
PredictorSpec patterned_mlp() {
  PredictorSpec spec{PredictorKind::Mlp, 3, 2, 0.5, {}};
  const std::vector<int> widths = {6, 5, 4, 4};
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    DenseLayer layer{Eigen::MatrixXd(widths[l + 1], widths[l]), Eigen::VectorXd(widths[l + 1])};
    for (int r = 0; r < widths[l + 1]; ++r) {
      for (int c = 0; c < widths[l]; ++c) {
        layer.weights(r, c) = 0.3 * std::sin(1.3 * (r + 1) + 0.7 * (c + 1) + 0.5 * l);
      }
      layer.bias[r] = 0.1 * std::cos(0.9 * (r + 1) + static_cast<double>(l));
    }
    spec.layers.push_back(layer);
  }
  validate(spec);
  return spec;
}

PredictorSpec zero_mlp(int past, int future) {
  PredictorSpec spec = make_mlp(past, future, {8}, 1);
  for (auto& l : spec.layers) {
    l.weights.setZero();
    l.bias.setZero();
  }
  return spec;
}

double max_relative_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return ((a - b).array().abs() / (1.0 + b.array().abs())).maxCoeff();
}

}  // namespace

TEST(ConstantVelocity, LinearExtrapolation) {
  const auto spec = make_constant_velocity(3, 3);
  const Trajectory past(std::vector<Vec2>{{0, 0}, {1, 0}, {2, 0}, {3, 0}}, 0.5);
  const Trajectory expected(std::vector<Vec2>{{4, 0}, {5, 0}, {6, 0}}, 0.5);
  EXPECT_EQ(predict(spec, past), expected);
}

TEST(ConstantVelocity, ClosedFormJacobian) {
  const auto spec = make_constant_velocity(3, 4);
  std::mt19937_64 rng(1);
  const auto pg = predict_with_gradient(spec, random_past(rng, 4));
  ASSERT_EQ(pg.jacobian.rows(), 8);
  ASSERT_EQ(pg.jacobian.cols(), 8);
  for (int k = 1; k <= 4; ++k) {
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(2, 8);
    expected.block<2, 2>(0, 6) = (1.0 + k) * Eigen::Matrix2d::Identity();
    expected.block<2, 2>(0, 4) = -static_cast<double>(k) * Eigen::Matrix2d::Identity();
    EXPECT_EQ(Eigen::MatrixXd(pg.jacobian.middleRows(2 * (k - 1), 2)), expected);
  }
}

TEST(Predict, HorizonMismatchThrows) {
  const auto spec = make_constant_velocity(4, 2);
  const Trajectory past(std::vector<Vec2>{{0, 0}, {1, 0}, {2, 0}}, 0.5);
  EXPECT_THROW(predict(spec, past), HorizonMismatch);
  EXPECT_THROW(predict_with_gradient(spec, past), HorizonMismatch);
}

TEST(Mlp, ZeroWeightsPredictAnchor) {
  const auto spec = zero_mlp(4, 5);
  std::mt19937_64 rng(2);
  const Trajectory past = random_past(rng, 5);
  const Trajectory pred = predict(spec, past);
  for (std::size_t k = 0; k < pred.size(); ++k) EXPECT_EQ(pred.state(k), past.back());

  const auto pg = predict_with_gradient(spec, past);
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(10, 10);
  for (int k = 0; k < 5; ++k) expected.block<2, 2>(2 * k, 8) = Eigen::Matrix2d::Identity();
  EXPECT_EQ(pg.jacobian, expected);
}

TEST(Mlp, ForwardPassMatchesIndependentScript) {
  // Expected values from tests/scripts/mlp_forward_oracle.py (numpy).
  const Trajectory past(std::vector<Vec2>{{0.0, 0.0}, {1.0, 0.2}, {2.1, 0.3}, {3.0, 0.7}}, 0.5);
  const Trajectory pred = predict(patterned_mlp(), past);
  EXPECT_NEAR(pred.state(0).x(), 2.861610166885166, 1e-13);
  EXPECT_NEAR(pred.state(0).y(), 0.6163527376459964, 1e-13);
  EXPECT_NEAR(pred.state(1).x(), 2.8992308150274484, 1e-13);
  EXPECT_NEAR(pred.state(1).y(), 0.7192495658728092, 1e-13);
}

TEST(Mlp, JacobianMatchesFiniteDifferencesOnRandomSpecs) {
  std::mt19937_64 rng(4);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int p = 1 + trial % 6;
    const int f = 1 + (trial * 7) % 12;
    const auto spec = make_mlp(p, f, {16, 8}, 100 + trial);
    const Trajectory past = random_past(rng, p + 1);
    const auto pg = predict_with_gradient(spec, past);
    EXPECT_EQ(pg.prediction, predict(spec, past));
    worst = std::max(worst, max_relative_error(pg.jacobian, oracle::fd_jacobian(spec, past, 1e-5)));
  }
  EXPECT_LE(worst, 1e-4);
}

TEST(Mlp, TranslationEquivariance) {
  std::mt19937_64 rng(5);
  for (const auto& spec : {make_mlp(4, 6, {12}, 3), make_constant_velocity(4, 6)}) {
    const Trajectory past = random_past(rng, 5);
    const Vec2 offset(12.5, -3.25);
    Eigen::VectorXd shifted = past.coords();
    for (int i = 0; i < 5; ++i) shifted.segment<2>(2 * i) += offset;
    const Trajectory a = predict(spec, past);
    const Trajectory b = predict(spec, Trajectory(shifted, 0.5));
    for (std::size_t k = 0; k < a.size(); ++k) {
      EXPECT_NEAR((b.state(k) - a.state(k) - offset).norm(), 0.0, 1e-12);
    }
  }
}

TEST(PredictorIo, RoundTripIsBitExact) {
  const auto dir = std::filesystem::temp_directory_path() / "trajattack_predictor_io";
  std::filesystem::create_directories(dir);
  for (const auto& spec : {make_mlp(4, 12, {64, 64}, 42), make_constant_velocity(6, 6, 0.4)}) {
    save_predictor(spec, dir / "p.json");
    EXPECT_EQ(load_predictor(dir / "p.json"), spec);
  }
  const auto doc = predictor_to_json(make_constant_velocity(6, 6));
  EXPECT_TRUE(doc["layers"].empty());
}

TEST(PredictorIo, WrongLayerWidthNamesField) {
  auto doc = nlohmann::json::parse(predictor_to_json(make_mlp(2, 3, {5}, 1)).dump());
  doc["layers"][1]["cols"] = 6;
  try {
    predictor_from_json(doc);
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.field(), "layers[1].cols");
  }
  doc = nlohmann::json::parse(predictor_to_json(make_mlp(2, 3, {5}, 1)).dump());
  doc["layers"][0]["weights"].erase(0);
  try {
    predictor_from_json(doc);
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.field(), "layers[0].weights");
  }
  doc.erase("P");
  EXPECT_THROW(predictor_from_json(doc), SchemaError);
}

TEST(Training, LearnsConstantVelocity) {
  GenConfig gen;
  // Steps of 0.5-1.5 m; the fit error scales with step length.
  gen.count = 1000;
  gen.past = 4;
  gen.future = 6;
  gen.dt = 0.1;
  gen.turn_rate = 0.0;
  gen.lane_change_rate = 0.0;
  gen.accel_max = 0.0;
  gen.noise = 0.0;
  gen.seed = 3;
  TrainConfig cfg;
  cfg.seed = 1;
  const auto result = train_mlp(generate_synthetic_dataset(gen), cfg);
  ASSERT_EQ(result.curve.size(), 200u);
  EXPECT_LT(result.curve.back().validation_ade, 0.05);
  EXPECT_LT(result.curve.back().train_mse, result.curve.front().train_mse);
}

TEST(Training, DeterministicAndNullUpdate) {
  GenConfig gen;
  gen.count = 50;
  gen.seed = 2;
  const auto data = generate_synthetic_dataset(gen);
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.hidden = {8};
  cfg.seed = 17;
  const auto a = train_mlp(data, cfg);
  const auto b = train_mlp(data, cfg);
  EXPECT_EQ(a.spec, b.spec);

  cfg.learning_rate = 0.0;
  const auto frozen = train_mlp(data, cfg);
  EXPECT_EQ(frozen.spec, frozen.initial);
  EXPECT_EQ(frozen.initial, a.initial);
}

TEST(Training, RejectsEmptyDataset) {
  EXPECT_THROW(train_mlp({}, TrainConfig{}), std::invalid_argument);
}

TEST(Training, DivergenceAbortsWithDiagnostic) {
  GenConfig gen;
  gen.count = 40;
  gen.seed = 2;
  TrainConfig cfg;
  cfg.epochs = 50;
  cfg.hidden = {8};
  cfg.learning_rate = 1e300;
  try {
    train_mlp(generate_synthetic_dataset(gen), cfg);
    FAIL() << "expected divergence";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("non-finite"), std::string::npos);
  }
}
