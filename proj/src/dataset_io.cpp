#include "trajattack/dataset_io.hpp"

#include <fstream>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "trajattack/errors.hpp"

namespace trajattack {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<Vec2> parse_states(const json& arr, const std::string& field, std::size_t line) {
  if (!arr.is_array()) throw ParseError("field '" + field + "' must be an array", line);
  std::vector<Vec2> states;
  states.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& p = arr[i];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw ParseError(field + "[" + std::to_string(i) + "] must be [x, y]", line);
    }
    states.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  return states;
}

Scenario parse_record(const std::string& text, std::size_t line) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), line);
  }
  if (!doc.is_object()) throw ParseError("record must be a JSON object", line);
  for (const char* key : {"id", "dt", "past", "future"}) {
    if (!doc.contains(key)) throw ParseError(std::string("missing field '") + key + "'", line);
  }
  if (!doc["id"].is_string()) throw ParseError("field 'id' must be a string", line);
  if (!doc["dt"].is_number()) throw ParseError("field 'dt' must be a number", line);

  const std::string id = doc["id"].get<std::string>();
  const double dt = doc["dt"].get<double>();
  const auto past = parse_states(doc["past"], "past", line);
  const auto future = parse_states(doc["future"], "future", line);

  if (doc.contains("P")) {
    if (!doc["P"].is_number_integer()) throw ParseError("field 'P' must be an integer", line);
    const auto declared = doc["P"].get<long long>();
    if (declared < 0 || static_cast<std::size_t>(declared) + 1 != past.size()) {
      throw ParseError("scenario '" + id + "': declared P=" + std::to_string(declared) +
                           " but past has " + std::to_string(past.size()) + " states",
                       line);
    }
  }
  if (doc.contains("F")) {
    if (!doc["F"].is_number_integer()) throw ParseError("field 'F' must be an integer", line);
    const auto declared = doc["F"].get<long long>();
    if (declared < 0 || static_cast<std::size_t>(declared) != future.size()) {
      throw ParseError("scenario '" + id + "': declared F=" + std::to_string(declared) +
                           " but future has " + std::to_string(future.size()) + " states",
                       line);
    }
  }

  try {
    Scenario s{id, Trajectory(past, dt), Trajectory(future, dt)};
    validate(s);
    return s;
  } catch (const std::invalid_argument& e) {
    throw ParseError("scenario '" + id + "': " + e.what(), line);
  }
}

ordered_json states_json(const Trajectory& traj) {
  ordered_json arr = ordered_json::array();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const Vec2 p = traj.state(i);
    arr.push_back({p.x(), p.y()});
  }
  return arr;
}

}  // namespace

std::vector<Scenario> read_dataset(std::istream& in) {
  std::vector<Scenario> out;
  std::set<std::string> seen;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    Scenario s = parse_record(text, line);
    if (!seen.insert(s.id).second) throw ParseError("duplicate scenario id '" + s.id + "'", line);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Scenario> read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset file '" + path.string() + "'");
  try {
    return read_dataset(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_dataset(const std::vector<Scenario>& scenarios, std::ostream& out) {
  for (const Scenario& s : scenarios) {
    ordered_json doc;
    doc["id"] = s.id;
    doc["dt"] = s.past.dt();
    doc["past"] = states_json(s.past);
    doc["future"] = states_json(s.future_truth);
    out << doc.dump() << '\n';
  }
}

void write_dataset(const std::vector<Scenario>& scenarios, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write dataset file '" + path.string() + "'");
  write_dataset(scenarios, out);
  if (!out) throw Error("failed writing dataset file '" + path.string() + "'");
}

std::pair<std::size_t, std::size_t> uniform_horizons(const std::vector<Scenario>& scenarios) {
  if (scenarios.empty()) throw std::invalid_argument("empty dataset");
  const std::size_t p = scenarios.front().horizon_past();
  const std::size_t f = scenarios.front().horizon_future();
  for (const Scenario& s : scenarios) {
    if (s.horizon_past() != p || s.horizon_future() != f) {
      throw HorizonMismatch("scenario '" + s.id + "' has horizons P=" +
                            std::to_string(s.horizon_past()) + ", F=" +
                            std::to_string(s.horizon_future()) + " but the dataset uses P=" +
                            std::to_string(p) + ", F=" + std::to_string(f));
    }
  }
  return {p, f};
}

}  // namespace trajattack
