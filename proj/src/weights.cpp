#include "trajattack/weights.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace trajattack {

std::string_view to_string(WeightKind kind) {
  return kind == WeightKind::Uniform ? "uniform" : "exponential";
}

WeightKind weight_kind_from_string(std::string_view name) {
  if (name == "uniform") return WeightKind::Uniform;
  if (name == "exponential") return WeightKind::Exponential;
  throw std::invalid_argument("unknown weight scheme '" + std::string(name) + "'");
}

WeightScheme make_weights(WeightKind kind, double alpha, int future) {
  if (future < 1) throw std::invalid_argument("weights need F >= 1");
  WeightScheme scheme{kind, alpha, std::vector<double>(static_cast<std::size_t>(future))};
  if (kind == WeightKind::Uniform) {
    for (double& w : scheme.weights) w = 1.0 / future;
    return scheme;
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("exponential weights need alpha in (0, 1)");
  }
  double sum = 0.0;
  for (int j = 1; j <= future; ++j) {
    scheme.weights[static_cast<std::size_t>(j - 1)] = std::pow(alpha, future - j);
  }
  // Sum smallest first.
  for (double w : scheme.weights) sum += w;
  for (double& w : scheme.weights) w /= sum;
  for (std::size_t j = 0; j < scheme.weights.size(); ++j) {
    if (!(scheme.weights[j] > 0.0) ||
        (j > 0 && !(scheme.weights[j - 1] < scheme.weights[j]))) {
      throw std::invalid_argument("alpha too small: exponential weights underflow for F = " +
                                  std::to_string(future));
    }
  }
  return scheme;
}

}  // namespace trajattack
