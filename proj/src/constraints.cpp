#include "trajattack/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "trajattack/errors.hpp"

namespace trajattack {

namespace {

ConstraintKind kind_of(Quantity q) {
  switch (q) {
    case Quantity::Speed: return ConstraintKind::Speed;
    case Quantity::AccelLon: return ConstraintKind::AccelLon;
    case Quantity::AccelLat: return ConstraintKind::AccelLat;
    case Quantity::JerkLon: return ConstraintKind::JerkLon;
    case Quantity::JerkLat: return ConstraintKind::JerkLat;
  }
  return ConstraintKind::Position;
}

Trajectory concatenate(const Scenario& s) {
  Eigen::VectorXd coords(s.past.coords().size() + s.future_truth.coords().size());
  coords << s.past.coords(), s.future_truth.coords();
  return Trajectory(std::move(coords), s.past.dt());
}

}  // namespace

std::string_view to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::Position: return "position";
    case ConstraintKind::Speed: return "speed";
    case ConstraintKind::AccelLon: return "accel_lon";
    case ConstraintKind::AccelLat: return "accel_lat";
    case ConstraintKind::JerkLon: return "jerk_lon";
    case ConstraintKind::JerkLat: return "jerk_lat";
  }
  return "unknown";
}

KinematicBounds compute_bounds(const std::vector<Scenario>& dataset, double multiplier) {
  if (dataset.empty()) throw std::invalid_argument("compute_bounds: empty dataset");
  if (!(multiplier > 0.0)) throw std::invalid_argument("compute_bounds: multiplier must be > 0");

  std::array<std::vector<double>, 5> pooled;
  for (const Scenario& s : dataset) {
    const KinematicProfile profile = derive_kinematics(concatenate(s));
    for (Quantity q : kAllQuantities) {
      const auto& v = profile.values(q);
      pooled[static_cast<std::size_t>(q)].insert(pooled[static_cast<std::size_t>(q)].end(),
                                                 v.begin(), v.end());
    }
  }

  KinematicBounds bounds;
  for (Quantity q : kAllQuantities) {
    const auto& values = pooled[static_cast<std::size_t>(q)];
    QuantityBound& b = bounds[q];
    b.multiplier = multiplier;
    b.samples = values.size();
    if (values.empty()) {
      b.enabled = false;
      continue;
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    b.mean = sum / static_cast<double>(values.size());
    double sq = 0.0;
    for (double v : values) sq += (v - b.mean) * (v - b.mean);
    b.stddev = std::sqrt(sq / static_cast<double>(values.size()));
  }
  return bounds;
}

nlohmann::json bounds_to_json(const KinematicBounds& bounds) {
  nlohmann::json doc;
  doc["two_sided"] = bounds.two_sided;
  for (Quantity q : kAllQuantities) {
    const QuantityBound& b = bounds[q];
    doc[std::string(to_string(q))] = {{"mu", b.mean},
                                      {"sigma", b.stddev},
                                      {"k", b.multiplier},
                                      {"enabled", b.enabled},
                                      {"samples", b.samples}};
  }
  return doc;
}

KinematicBounds bounds_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw SchemaError("$", "expected an object");
  KinematicBounds bounds;
  if (doc.contains("two_sided")) {
    if (!doc["two_sided"].is_boolean()) throw SchemaError("two_sided", "expected a boolean");
    bounds.two_sided = doc["two_sided"].get<bool>();
  }
  for (Quantity q : kAllQuantities) {
    const std::string name(to_string(q));
    if (!doc.contains(name)) throw SchemaError(name, "missing field");
    const auto& entry = doc[name];
    QuantityBound& b = bounds[q];
    for (const char* key : {"mu", "sigma", "k"}) {
      if (!entry.contains(key) || !entry[key].is_number()) {
        throw SchemaError(name + "." + key, "expected a number");
      }
    }
    b.mean = entry["mu"].get<double>();
    b.stddev = entry["sigma"].get<double>();
    b.multiplier = entry["k"].get<double>();
    if (entry.contains("enabled")) {
      if (!entry["enabled"].is_boolean()) throw SchemaError(name + ".enabled", "expected a boolean");
      b.enabled = entry["enabled"].get<bool>();
    }
    if (entry.contains("samples")) b.samples = entry["samples"].get<std::size_t>();
    if (!(b.stddev >= 0.0)) throw SchemaError(name + ".sigma", "must be >= 0");
    if (!(b.multiplier > 0.0)) throw SchemaError(name + ".k", "must be > 0");
  }
  return bounds;
}

std::optional<Violation> FeasibilityReport::worst() const {
  if (violations.empty()) return std::nullopt;
  return *std::max_element(violations.begin(), violations.end(),
                           [](const Violation& a, const Violation& b) {
                             return a.normalized < b.normalized;
                           });
}

ConstraintSet::ConstraintSet(Trajectory nominal, const KinematicBounds& bounds,
                             double position_radius)
    : nominal_(std::move(nominal)), bounds_(bounds), radius_(position_radius) {
  if (!(radius_ > 0.0)) throw std::invalid_argument("position radius must be positive");
  if (nominal_.size() < 2) throw std::invalid_argument("nominal trajectory needs >= 2 states");
  for (Quantity q : kAllQuantities) {
    const QuantityBound& b = bounds_[q];
    if (!(b.stddev >= 0.0) || !(b.multiplier > 0.0)) {
      throw std::invalid_argument("bound for " + std::string(to_string(q)) +
                                  " needs sigma >= 0 and k > 0");
    }
    bands_[static_cast<std::size_t>(q)] = Band{b.lower(), b.upper(), b.enabled, bounds_.two_sided};
  }

  const KinematicProfile profile = derive_kinematics(nominal_);
  for (Quantity q : kAllQuantities) {
    Band& band = bands_[static_cast<std::size_t>(q)];
    const auto& values = profile.values(q);
    if (!band.enabled || values.empty()) continue;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double new_lower = band.lower_enforced ? std::min(band.lower, *lo) : band.lower;
    const double new_upper = std::max(band.upper, *hi);
    if (new_lower != band.lower || new_upper != band.upper) {
      adjustments_.push_back({q, band.lower, band.upper, new_lower, new_upper});
      band.lower = new_lower;
      band.upper = new_upper;
    }
  }

  if (!check_feasibility(*this, nominal_).feasible()) {
    throw std::logic_error("nominal trajectory violates its own constraint set");
  }
}

FeasibilityReport check_feasibility(const ConstraintSet& cs, const Trajectory& candidate) {
  const Trajectory& nominal = cs.nominal();
  if (candidate.size() != nominal.size()) {
    throw std::invalid_argument("candidate has " + std::to_string(candidate.size()) +
                                " states, nominal has " + std::to_string(nominal.size()));
  }
  if (candidate.dt() != nominal.dt()) throw std::invalid_argument("candidate dt differs");

  FeasibilityReport report;
  std::vector<double> deviation(candidate.size());
  for (std::size_t n = 0; n < candidate.size(); ++n) {
    deviation[n] = (candidate.state(n) - nominal.state(n)).norm();
    const double excess = deviation[n] - cs.position_radius();
    if (excess > kFeasibilitySlack) {
      report.violations.push_back(
          {n, ConstraintKind::Position, n, excess, excess / cs.position_radius()});
    }
  }

  const KinematicProfile profile = derive_kinematics(candidate);
  for (Quantity q : kAllQuantities) {
    const Band& band = cs.band(q);
    if (!band.enabled) continue;
    const double half_width = std::max(0.5 * (band.upper - band.lower), kFeasibilitySlack);
    const auto& values = profile.values(q);
    for (std::size_t i = 0; i < values.size(); ++i) {
      double excess = 0.0;
      if (values[i] > band.upper + kFeasibilitySlack) {
        excess = values[i] - band.upper;
      } else if (band.lower_enforced && values[i] < band.lower - kFeasibilitySlack) {
        excess = band.lower - values[i];
      } else {
        continue;
      }
      // Attribute to the supporting state that moved the most; later wins ties.
      std::size_t blamed = 0;
      double most = -1.0;
      for (std::size_t s : supporting_states(q, i)) {
        if (deviation[s] >= most) {
          most = deviation[s];
          blamed = s;
        }
      }
      report.violations.push_back({blamed, kind_of(q), i, excess, excess / half_width});
    }
  }
  return report;
}

nlohmann::json report_to_json(const FeasibilityReport& report) {
  nlohmann::json doc;
  doc["feasible"] = report.feasible();
  doc["violations"] = nlohmann::json::array();
  for (const Violation& v : report.violations) {
    doc["violations"].push_back({{"state", v.state},
                                 {"constraint", std::string(to_string(v.constraint))},
                                 {"entry", v.entry},
                                 {"amount", v.amount}});
  }
  return doc;
}

}  // namespace trajattack
