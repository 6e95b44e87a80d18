#pragma once

#include <string_view>
#include <vector>

namespace trajattack {

enum class WeightKind { Uniform, Exponential };

std::string_view to_string(WeightKind kind);
WeightKind weight_kind_from_string(std::string_view name);

/// Per-future-state importance weights, normalized to sum to one.
struct WeightScheme {
  WeightKind kind = WeightKind::Exponential;
  double alpha = 0.7;
  std::vector<double> weights;
};

/// Uniform: 1/F each. Exponential: w_j proportional to alpha^(F - j), so the
/// last state carries the most weight. Throws std::invalid_argument for F < 1,
/// alpha outside (0, 1), or alpha so small that weights underflow.
WeightScheme make_weights(WeightKind kind, double alpha, int future);

}  // namespace trajattack
