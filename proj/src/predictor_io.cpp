#include "trajattack/predictor_io.hpp"

#include <fstream>
#include <string>

#include "trajattack/errors.hpp"

namespace trajattack {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) throw SchemaError(path + key, "missing field");
  return obj.at(key);
}

int require_int(const json& obj, const std::string& key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_number_integer()) throw SchemaError(path + key, "expected an integer");
  return v.get<int>();
}

double require_number(const json& obj, const std::string& key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_number()) throw SchemaError(path + key, "expected a number");
  return v.get<double>();
}

Eigen::VectorXd number_array(const json& v, Eigen::Index expected, const std::string& path) {
  if (!v.is_array()) throw SchemaError(path, "expected an array");
  if (static_cast<Eigen::Index>(v.size()) != expected) {
    throw SchemaError(path, "expected " + std::to_string(expected) + " values, found " +
                                std::to_string(v.size()));
  }
  Eigen::VectorXd out(expected);
  for (Eigen::Index i = 0; i < expected; ++i) {
    const json& x = v[static_cast<std::size_t>(i)];
    if (!x.is_number()) {
      throw SchemaError(path + "[" + std::to_string(i) + "]", "expected a number");
    }
    out[i] = x.get<double>();
  }
  return out;
}

}  // namespace

ordered_json predictor_to_json(const PredictorSpec& spec) {
  ordered_json doc;
  doc["kind"] = spec.kind == PredictorKind::Mlp ? "mlp" : "constant_velocity";
  doc["P"] = spec.past;
  doc["F"] = spec.future;
  doc["dt_hint"] = spec.dt_hint;
  doc["activation"] = "tanh";
  ordered_json layers = ordered_json::array();
  for (const DenseLayer& layer : spec.layers) {
    ordered_json l;
    l["rows"] = layer.weights.rows();
    l["cols"] = layer.weights.cols();
    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(layer.weights.size()));
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) w.push_back(layer.weights(r, c));
    }
    l["weights"] = w;
    l["bias"] = std::vector<double>(layer.bias.data(), layer.bias.data() + layer.bias.size());
    layers.push_back(std::move(l));
  }
  doc["layers"] = std::move(layers);
  return doc;
}

PredictorSpec predictor_from_json(const json& doc) {
  if (!doc.is_object()) throw SchemaError("$", "expected an object");
  PredictorSpec spec;
  const json& kind = require(doc, "kind", "");
  if (kind == "constant_velocity") {
    spec.kind = PredictorKind::ConstantVelocity;
  } else if (kind == "mlp") {
    spec.kind = PredictorKind::Mlp;
  } else {
    throw SchemaError("kind", "expected \"constant_velocity\" or \"mlp\"");
  }
  spec.past = require_int(doc, "P", "");
  spec.future = require_int(doc, "F", "");
  spec.dt_hint = doc.contains("dt_hint") ? require_number(doc, "dt_hint", "") : 0.5;
  if (doc.contains("activation") && doc["activation"] != "tanh") {
    throw SchemaError("activation", "only \"tanh\" is supported");
  }
  if (spec.past < 1) throw SchemaError("P", "must be >= 1");
  if (spec.future < 1) throw SchemaError("F", "must be >= 1");

  const json empty = json::array();
  const json& layers = doc.contains("layers") ? doc["layers"] : empty;
  if (!layers.is_array()) throw SchemaError("layers", "expected an array");
  if (spec.kind == PredictorKind::ConstantVelocity && !layers.empty()) {
    throw SchemaError("layers", "constant_velocity predictors carry no layers");
  }
  if (spec.kind == PredictorKind::Mlp && layers.empty()) {
    throw SchemaError("layers", "mlp needs at least one layer");
  }

  Eigen::Index width = 2 * spec.past;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const std::string path = "layers[" + std::to_string(l) + "].";
    const json& layer = layers[l];
    const int rows = require_int(layer, "rows", path);
    const int cols = require_int(layer, "cols", path);
    if (cols != width) {
      throw SchemaError(path + "cols", "expected " + std::to_string(width) + ", found " +
                                           std::to_string(cols));
    }
    const bool is_last = l + 1 == layers.size();
    if (rows <= 0 || (is_last && rows != 2 * spec.future)) {
      throw SchemaError(path + "rows",
                        is_last ? "output layer must have 2F = " + std::to_string(2 * spec.future) +
                                      " rows, found " + std::to_string(rows)
                                : "must be positive");
    }
    const Eigen::VectorXd flat =
        number_array(require(layer, "weights", path), Eigen::Index(rows) * cols, path + "weights");
    DenseLayer dense{Eigen::MatrixXd(rows, cols), number_array(require(layer, "bias", path), rows,
                                                               path + "bias")};
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) dense.weights(r, c) = flat[Eigen::Index(r) * cols + c];
    }
    spec.layers.push_back(std::move(dense));
    width = rows;
  }
  try {
    validate(spec);
  } catch (const std::invalid_argument& e) {
    throw SchemaError("$", e.what());
  }
  return spec;
}

void save_predictor(const PredictorSpec& spec, const std::filesystem::path& path) {
  validate(spec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write predictor file '" + path.string() + "'");
  out << predictor_to_json(spec).dump() << '\n';
}

PredictorSpec load_predictor(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open predictor file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": invalid JSON: " + e.what());
  }
  return predictor_from_json(doc);
}

}  // namespace trajattack
