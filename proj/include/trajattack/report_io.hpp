#pragma once

#include <iosfwd>

#include <nlohmann/json.hpp>

#include "trajattack/eval.hpp"

namespace trajattack {

/// scenario_id,J_acc_nom,J_GY,J_bar,iterations,wall_time_s,optimizer,K_max
void write_metrics_csv(const MetricsReport& report, std::ostream& out);
nlohmann::json metrics_to_json(const MetricsReport& report);

/// scenario_id,iteration,loss with iteration 0 holding J(Delta^0).
void write_trace_csv(const MetricsReport& report, std::ostream& out);

void write_noise_csv(const NoiseReport& report, std::ostream& out);
nlohmann::json noise_to_json(const NoiseReport& report);

}  // namespace trajattack
