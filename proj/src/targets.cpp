#include "trajattack/targets.hpp"

#include <string>

#include "trajattack/errors.hpp"

namespace trajattack {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

Trajectory make_target(const TargetSpec& spec, const Scenario& scenario) {
  const Trajectory& truth = scenario.future_truth;
  const Vec2 anchor = scenario.past.back();
  return std::visit(
      Overloaded{
          [&](const LateralShift& shift) {
            const Vec2 chord = truth.front() - anchor;
            const double len = chord.norm();
            const Vec2 heading = len > 0.0 ? Vec2(chord / len) : Vec2(1.0, 0.0);
            const Vec2 offset = shift.distance * Vec2(-heading.y(), heading.x());
            Eigen::VectorXd coords = truth.coords();
            for (std::size_t m = 0; m < truth.size(); ++m) {
              coords.segment<2>(2 * static_cast<Eigen::Index>(m)) += offset;
            }
            return Trajectory(std::move(coords), truth.dt());
          },
          [&](const Speedup& speedup) {
            Eigen::VectorXd coords = truth.coords();
            for (std::size_t m = 0; m < truth.size(); ++m) {
              coords.segment<2>(2 * static_cast<Eigen::Index>(m)) =
                  anchor + speedup.factor * (truth.state(m) - anchor);
            }
            return Trajectory(std::move(coords), truth.dt());
          },
          [&](const CustomTargets& custom) {
            const auto it = custom.by_id.find(scenario.id);
            if (it == custom.by_id.end()) {
              throw Error("no custom target for scenario '" + scenario.id + "'");
            }
            if (it->second.size() != truth.size()) {
              throw HorizonMismatch("custom target for scenario '" + scenario.id + "' has " +
                                    std::to_string(it->second.size()) + " states, expected " +
                                    std::to_string(truth.size()));
            }
            return Trajectory(it->second.coords(), truth.dt());
          }},
      spec);
}

TargetSpec target_spec_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string()) {
    throw SchemaError("kind", "expected a string");
  }
  const std::string kind = doc["kind"].get<std::string>();
  auto number = [&](const char* key, double fallback) {
    if (!doc.contains(key)) return fallback;
    if (!doc[key].is_number()) throw SchemaError(key, "expected a number");
    return doc[key].get<double>();
  };
  if (kind == "lateral_shift") return LateralShift{number("distance", 1.0)};
  if (kind == "speedup") return Speedup{number("factor", 1.5)};
  if (kind == "custom") {
    const double dt = number("dt", 0.5);
    if (!doc.contains("targets") || !doc["targets"].is_object()) {
      throw SchemaError("targets", "expected an object keyed by scenario id");
    }
    CustomTargets custom;
    for (const auto& [id, states] : doc["targets"].items()) {
      const std::string path = "targets." + id;
      if (!states.is_array() || states.empty()) throw SchemaError(path, "expected [[x, y], ...]");
      std::vector<Vec2> pts;
      for (std::size_t i = 0; i < states.size(); ++i) {
        const auto& p = states[i];
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
          throw SchemaError(path + "[" + std::to_string(i) + "]", "expected [x, y]");
        }
        pts.emplace_back(p[0].get<double>(), p[1].get<double>());
      }
      custom.by_id.emplace(id, Trajectory(pts, dt));
    }
    return custom;
  }
  throw SchemaError("kind", "expected lateral_shift, speedup or custom");
}

nlohmann::json target_spec_to_json(const TargetSpec& spec) {
  return std::visit(
      Overloaded{
          [](const LateralShift& s) -> nlohmann::json {
            return {{"kind", "lateral_shift"}, {"distance", s.distance}};
          },
          [](const Speedup& s) -> nlohmann::json {
            return {{"kind", "speedup"}, {"factor", s.factor}};
          },
          [](const CustomTargets& c) -> nlohmann::json {
            nlohmann::json doc{{"kind", "custom"}, {"targets", nlohmann::json::object()}};
            for (const auto& [id, traj] : c.by_id) {
              doc["dt"] = traj.dt();
              nlohmann::json arr = nlohmann::json::array();
              for (std::size_t i = 0; i < traj.size(); ++i) {
                arr.push_back({traj.state(i).x(), traj.state(i).y()});
              }
              doc["targets"][id] = std::move(arr);
            }
            return doc;
          }},
      spec);
}

}  // namespace trajattack
