#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "trajattack/predictor.hpp"

namespace trajattack {

// {"kind", "P", "F", "dt_hint", "layers": [{"rows", "cols", "weights", "bias"}, ...]}
// weights are row-major. Doubles are written in shortest round-trip form.

nlohmann::ordered_json predictor_to_json(const PredictorSpec& spec);
PredictorSpec predictor_from_json(const nlohmann::json& doc);

void save_predictor(const PredictorSpec& spec, const std::filesystem::path& path);
PredictorSpec load_predictor(const std::filesystem::path& path);

}  // namespace trajattack
