#include <cmath>
#include <vector>

#include "trajattack/oracle/oracle.hpp"

namespace trajattack::oracle {

namespace {

bool inside(const Band& band, double value) {
  if (!band.enabled) return true;
  if (value > band.upper + kFeasibilitySlack) return false;
  if (band.lower_enforced && value < band.lower - kFeasibilitySlack) return false;
  return true;
}

}  // namespace

bool reference_feasible(const ConstraintSet& cs, const Trajectory& candidate) {
  const auto& c = candidate.coords();
  const auto& x = cs.nominal().coords();
  const std::size_t n = candidate.size();
  const double dt = candidate.dt();

  for (std::size_t i = 0; i < n; ++i) {
    if (std::hypot(c[2 * i] - x[2 * i], c[2 * i + 1] - x[2 * i + 1]) >
        cs.position_radius() + kFeasibilitySlack) {
      return false;
    }
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double v = std::hypot(c[2 * i + 2] - c[2 * i], c[2 * i + 3] - c[2 * i + 1]) / dt;
    if (!inside(cs.band(Quantity::Speed), v)) return false;
  }

  std::vector<double> lon, lat;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double ax = (c[2 * i + 2] - 2.0 * c[2 * i] + c[2 * i - 2]) / (dt * dt);
    const double ay = (c[2 * i + 3] - 2.0 * c[2 * i + 1] + c[2 * i - 1]) / (dt * dt);
    double hx = c[2 * i + 2] - c[2 * i - 2];
    double hy = c[2 * i + 3] - c[2 * i - 1];
    const double len = std::hypot(hx, hy);
    if (len > 0.0) {
      hx /= len;
      hy /= len;
    } else {
      hx = 1.0;
      hy = 0.0;
    }
    lon.push_back(ax * hx + ay * hy);
    lat.push_back(-ax * hy + ay * hx);
  }
  for (std::size_t j = 0; j < lon.size(); ++j) {
    if (!inside(cs.band(Quantity::AccelLon), lon[j])) return false;
    if (!inside(cs.band(Quantity::AccelLat), lat[j])) return false;
  }
  for (std::size_t j = 0; j + 1 < lon.size(); ++j) {
    if (!inside(cs.band(Quantity::JerkLon), (lon[j + 1] - lon[j]) / dt)) return false;
    if (!inside(cs.band(Quantity::JerkLat), (lat[j + 1] - lat[j]) / dt)) return false;
  }
  return true;
}

}  // namespace trajattack::oracle
