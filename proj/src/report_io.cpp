#include "trajattack/report_io.hpp"

#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace trajattack {

void write_metrics_csv(const MetricsReport& report, std::ostream& out) {
  out << "scenario_id,J_acc_nom,J_GY,J_bar,iterations,wall_time_s,optimizer,K_max\n";
  for (const ScenarioMetrics& r : report.rows) {
    fmt::print(out, "{},{},{},{},{},{},{},{}\n", r.scenario_id, r.j_acc_nom, r.j_gy, r.j_bar,
               r.iterations, r.wall_time_s, r.optimizer, r.k_max);
  }
}

nlohmann::json metrics_to_json(const MetricsReport& report) {
  nlohmann::json doc;
  doc["note"] = "J_bar is the best loss reached during each attack run";
  doc["rows"] = nlohmann::json::array();
  for (const ScenarioMetrics& r : report.rows) {
    doc["rows"].push_back({{"scenario_id", r.scenario_id},
                           {"J_acc_nom", r.j_acc_nom},
                           {"J_GY", r.j_gy},
                           {"J_bar", r.j_bar},
                           {"J_zero", r.j_zero},
                           {"iterations", r.iterations},
                           {"wall_time_s", r.wall_time_s},
                           {"optimizer", r.optimizer},
                           {"K_max", r.k_max}});
  }
  doc["averages"] = {{"J_acc_nom", report.mean_j_acc_nom()},
                     {"J_GY", report.mean_j_gy()},
                     {"J_bar", report.mean_j_bar()},
                     {"J_zero", report.mean_j_zero()},
                     {"wall_time_s", report.mean_wall_time()}};
  doc["failures"] = nlohmann::json::array();
  for (const SuiteFailure& f : report.failures) {
    doc["failures"].push_back({{"scenario_id", f.scenario_id}, {"message", f.message}});
  }
  return doc;
}

void write_trace_csv(const MetricsReport& report, std::ostream& out) {
  out << "scenario_id,iteration,loss\n";
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const AttackResult& res = report.results[i];
    fmt::print(out, "{},0,{}\n", report.rows[i].scenario_id, res.initial_loss);
    for (std::size_t k = 0; k < res.loss_trace.size(); ++k) {
      fmt::print(out, "{},{},{}\n", report.rows[i].scenario_id, k + 1, res.loss_trace[k]);
    }
  }
}

void write_noise_csv(const NoiseReport& report, std::ostream& out) {
  out << "scenario_id,clean_J_acc,clean_J,noisy_clean_J_acc,noisy_clean_J,adversarial_J,"
         "noisy_adversarial_J\n";
  for (const NoiseRow& r : report.rows) {
    fmt::print(out, "{},{},{},{},{},{},{}\n", r.scenario_id, r.clean_j_acc, r.clean_j,
               r.noisy_clean_j_acc, r.noisy_clean_j, r.adversarial_j, r.noisy_adversarial_j);
  }
}

nlohmann::json noise_to_json(const NoiseReport& report) {
  auto states = [](const Trajectory& t) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < t.size(); ++i) arr.push_back({t.state(i).x(), t.state(i).y()});
    return arr;
  };
  nlohmann::json doc;
  doc["averages"] = {{"clean_J_acc", report.mean_clean_j_acc},
                     {"clean_J", report.mean_clean_j},
                     {"noisy_clean_J_acc", report.mean_noisy_clean_j_acc},
                     {"noisy_clean_J", report.mean_noisy_clean_j},
                     {"adversarial_J", report.mean_adversarial_j},
                     {"noisy_adversarial_J", report.mean_noisy_adversarial_j}};
  doc["rows"] = nlohmann::json::array();
  for (const NoiseRow& r : report.rows) {
    doc["rows"].push_back({{"scenario_id", r.scenario_id},
                           {"noisy_clean", states(r.noisy_clean)},
                           {"noisy_adversarial", states(r.noisy_adversarial)},
                           {"clean_J_acc", r.clean_j_acc},
                           {"clean_J", r.clean_j},
                           {"noisy_clean_J_acc", r.noisy_clean_j_acc},
                           {"noisy_clean_J", r.noisy_clean_j},
                           {"adversarial_J", r.adversarial_j},
                           {"noisy_adversarial_J", r.noisy_adversarial_j}});
  }
  doc["failures"] = metrics_to_json(report.attack)["failures"];
  return doc;
}

}  // namespace trajattack
