#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "trajattack/attack.hpp"

namespace trajattack {

Perturbation scale(const Perturbation& delta, const std::vector<double>& theta) {
  if (theta.size() != delta.size()) throw std::invalid_argument("theta length mismatch");
  Perturbation out = delta;
  for (std::size_t n = 0; n < theta.size(); ++n) {
    out.coords.segment<2>(2 * static_cast<Eigen::Index>(n)) *= theta[n];
  }
  return out;
}

namespace {

std::vector<double> to_theta(const std::vector<int>& steps, int grid) {
  std::vector<double> theta(steps.size());
  for (std::size_t n = 0; n < steps.size(); ++n) {
    theta[n] = static_cast<double>(steps[n]) / static_cast<double>(grid);
  }
  return theta;
}

int total(const std::vector<int>& steps) { return std::accumulate(steps.begin(), steps.end(), 0); }

bool outside(const Band& band, double value) {
  return value > band.upper + kFeasibilitySlack ||
         (band.lower_enforced && value < band.lower - kFeasibilitySlack);
}

/// Depth-first search over theta in state order. Every constraint involves at
/// most four consecutive states, so each is checked as soon as its last state
/// is assigned, on a window of the candidate.
class BranchAndBound {
 public:
  BranchAndBound(const ConstraintSet& cs, const Perturbation& delta, int grid, long budget)
      : cs_(cs), delta_(delta), grid_(grid), budget_(budget), n_(cs.nominal().size()),
        steps_(n_, 0), states_(n_), cap_(n_), cap_suffix_(n_ + 1, 0) {
    // Per-state ceiling from the position constraint alone.
    for (std::size_t k = 0; k < n_; ++k) {
      int cap = grid_;
      while (cap > 0 && !position_ok(k, cap)) --cap;
      cap_[k] = cap;
    }
    for (std::size_t k = n_; k-- > 0;) cap_suffix_[k] = cap_suffix_[k + 1] + cap_[k];
  }

  int upper_bound() const { return cap_suffix_[0]; }

  /// Improves on `best` if a feasible grid point with a larger sum exists.
  /// Returns false when the budget ran out before the search finished.
  bool improve(std::vector<int>& best) {
    best_ = best;
    best_sum_ = total(best);
    exhausted_ = false;
    search(0, 0);
    best = best_;
    return !exhausted_;
  }

 private:
  void search(std::size_t k, int sum) {
    if (k == n_) {
      if (sum > best_sum_) {
        best_sum_ = sum;
        best_ = steps_;
      }
      return;
    }
    for (int v = cap_[k]; v >= 0; --v) {
      if (sum + v + cap_suffix_[k + 1] <= best_sum_) return;
      if (budget_-- <= 0) {
        exhausted_ = true;
        return;
      }
      steps_[k] = v;
      states_[k] = candidate(k, v);
      if (!position_ok(k, v) || !window_feasible(k)) continue;
      search(k + 1, sum + v);
      if (exhausted_) return;
    }
  }

  Vec2 candidate(std::size_t k, int v) const {
    const double theta = static_cast<double>(v) / static_cast<double>(grid_);
    return cs_.nominal().state(k) + Vec2(theta * delta_.state(k));
  }

  bool position_ok(std::size_t k, int v) const {
    return (candidate(k, v) - cs_.nominal().state(k)).norm() - cs_.position_radius() <=
           kFeasibilitySlack;
  }

  bool window_feasible(std::size_t k) const {
    if (k == 0) return true;
    const double dt = cs_.nominal().dt();
    // The entry of each quantity whose support ends at k.
    if (violates(Quantity::Speed, step_speed(states_[k - 1], states_[k], dt))) return false;
    if (k < 2) return true;
    const Vec2 a = frame_acceleration(states_[k - 2], states_[k - 1], states_[k], dt);
    if (violates(Quantity::AccelLon, a.x()) || violates(Quantity::AccelLat, a.y())) return false;
    if (k < 3) return true;
    const Vec2 before = frame_acceleration(states_[k - 3], states_[k - 2], states_[k - 1], dt);
    return !violates(Quantity::JerkLon, (a.x() - before.x()) / dt) &&
           !violates(Quantity::JerkLat, (a.y() - before.y()) / dt);
  }

  bool violates(Quantity q, double value) const {
    const Band& band = cs_.band(q);
    return band.enabled && outside(band, value);
  }

  const ConstraintSet& cs_;
  const Perturbation& delta_;
  int grid_;
  long budget_;
  std::size_t n_;
  std::vector<int> steps_;
  std::vector<Vec2> states_;
  std::vector<int> cap_;
  std::vector<int> cap_suffix_;
  std::vector<int> best_;
  int best_sum_ = 0;
  bool exhausted_ = false;
};

}  // namespace

std::vector<double> project_line_search(const ConstraintSet& cs, const Perturbation& delta,
                                        int grid, long search_budget) {
  if (grid < 1) throw std::invalid_argument("projection grid must be >= 1");
  const std::size_t n = cs.nominal().size();
  if (delta.size() != n) throw std::invalid_argument("perturbation length mismatch");

  auto report_for = [&](const std::vector<int>& steps) {
    return check_feasibility(cs, apply(cs.nominal(), scale(delta, to_theta(steps, grid))));
  };
  auto feasible = [&](const std::vector<int>& steps) { return report_for(steps).feasible(); };

  // Shrink: lower theta of the state blamed for the worst violation.
  std::vector<int> steps(n, grid);
  for (FeasibilityReport report = report_for(steps); !report.feasible();
       report = report_for(steps)) {
    const Violation* pick = nullptr;
    for (const Violation& v : report.violations) {
      if (steps[v.state] > 0 && (pick == nullptr || v.normalized > pick->normalized)) pick = &v;
    }
    if (pick != nullptr) {
      --steps[pick->state];
      continue;
    }
    // Every blamed state is already at zero; shrink the largest remaining one.
    std::size_t largest = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (steps[i] > steps[largest]) largest = i;
    }
    if (steps[largest] == 0) {
      throw std::logic_error("projection reached theta = 0 without feasibility");
    }
    --steps[largest];
  }

  // Raise: shrinking one state can free its neighbours.
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      while (steps[i] < grid) {
        ++steps[i];
        if (feasible(steps)) {
          changed = true;
        } else {
          --steps[i];
          break;
        }
      }
    }
  }

  // The greedy pass can stall where coupled quantities need several states
  // to move together; search the grid for a larger sum, within the budget.
  if (search_budget > 0) {
    BranchAndBound bnb(cs, delta, grid, search_budget);
    if (total(steps) < bnb.upper_bound()) {
      std::vector<int> candidate = steps;
      bnb.improve(candidate);
      if (total(candidate) > total(steps) && feasible(candidate)) steps = std::move(candidate);
    }
  }
  return to_theta(steps, grid);
}

}  // namespace trajattack
