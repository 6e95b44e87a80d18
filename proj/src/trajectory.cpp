#include "trajattack/trajectory.hpp"

#include <cmath>
#include <stdexcept>

namespace trajattack {

namespace {

void check(const Eigen::VectorXd& coords, double dt) {
  if (coords.size() < 2 || coords.size() % 2 != 0) {
    throw std::invalid_argument("trajectory needs at least one (x, y) state");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("trajectory dt must be positive and finite");
  }
  if (!coords.allFinite()) {
    throw std::invalid_argument("trajectory coordinates must be finite");
  }
}

}  // namespace

Trajectory::Trajectory(const std::vector<Vec2>& states, double dt) : dt_(dt) {
  coords_.resize(2 * static_cast<Eigen::Index>(states.size()));
  for (std::size_t i = 0; i < states.size(); ++i) {
    coords_.segment<2>(2 * static_cast<Eigen::Index>(i)) = states[i];
  }
  check(coords_, dt_);
}

Trajectory::Trajectory(Eigen::VectorXd coords, double dt) : coords_(std::move(coords)), dt_(dt) {
  check(coords_, dt_);
}

std::vector<Vec2> Trajectory::states() const {
  std::vector<Vec2> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = state(i);
  return out;
}

Trajectory Trajectory::slice(std::size_t first, std::size_t count) const {
  if (first + count > size() || count == 0) {
    throw std::out_of_range("trajectory slice out of range");
  }
  return Trajectory(
      Eigen::VectorXd(coords_.segment(2 * static_cast<Eigen::Index>(first),
                                      2 * static_cast<Eigen::Index>(count))),
      dt_);
}

bool Trajectory::operator==(const Trajectory& other) const {
  return dt_ == other.dt_ && coords_.size() == other.coords_.size() && coords_ == other.coords_;
}

Trajectory apply(const Trajectory& nominal, const Perturbation& delta) {
  if (delta.coords.size() != nominal.coords().size()) {
    throw std::invalid_argument("perturbation length does not match trajectory");
  }
  return Trajectory(Eigen::VectorXd(nominal.coords() + delta.coords), nominal.dt());
}

Perturbation canonicalize(const Trajectory& nominal, const Perturbation& delta) {
  Perturbation current = delta;
  // Converges in one or two rounds; the bound only guards against pathology.
  for (int round = 0; round < 8; ++round) {
    Eigen::VectorXd next = (nominal.coords() + current.coords) - nominal.coords();
    if (next == current.coords) return current;
    current.coords = std::move(next);
  }
  return current;
}

void validate(const Scenario& scenario) {
  if (scenario.past.size() < 2) {
    throw std::invalid_argument("scenario '" + scenario.id + "': past needs at least 2 states");
  }
  if (scenario.future_truth.size() < 1) {
    throw std::invalid_argument("scenario '" + scenario.id + "': empty future");
  }
  if (scenario.past.dt() != scenario.future_truth.dt()) {
    throw std::invalid_argument("scenario '" + scenario.id + "': past and future dt differ");
  }
}

}  // namespace trajattack
