#include <functional>
#include <stdexcept>

#include "trajattack/oracle/oracle.hpp"

namespace trajattack::oracle {

ThetaOracle brute_force_theta(const ConstraintSet& cs, const Eigen::VectorXd& delta, int grid) {
  const std::size_t n = cs.nominal().size();
  if (n > 4) throw std::invalid_argument("brute_force_theta: at most 4 states");
  if (grid < 1) throw std::invalid_argument("brute_force_theta: grid must be >= 1");
  if (static_cast<std::size_t>(delta.size()) != 2 * n) {
    throw std::invalid_argument("brute_force_theta: delta length mismatch");
  }

  std::vector<int> steps(n, 0);
  auto feasible = [&]() {
    Eigen::VectorXd c = cs.nominal().coords();
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(steps[i]) / grid;
      c[2 * i] += t * delta[2 * i];
      c[2 * i + 1] += t * delta[2 * i + 1];
    }
    return reference_feasible(cs, Trajectory(std::move(c), cs.nominal().dt()));
  };

  // Walk sum levels from the top; within a level visit vectors in
  // lexicographically decreasing order and stop at the first feasible one.
  const int total_max = static_cast<int>(n) * grid;
  for (int level = total_max; level >= 0; --level) {
    std::function<bool(std::size_t, int)> descend = [&](std::size_t i, int remaining) -> bool {
      if (i + 1 == n) {
        if (remaining > grid) return false;
        steps[i] = remaining;
        return feasible();
      }
      const int rest_capacity = static_cast<int>(n - i - 1) * grid;
      for (int v = std::min(grid, remaining); v >= 0 && remaining - v <= rest_capacity; --v) {
        steps[i] = v;
        if (descend(i + 1, remaining - v)) return true;
      }
      return false;
    };
    if (descend(0, level)) {
      ThetaOracle out;
      for (int s : steps) out.theta.push_back(static_cast<double>(s) / grid);
      out.sum = static_cast<double>(level) / grid;
      return out;
    }
  }
  throw std::logic_error("brute_force_theta: theta = 0 infeasible (nominal outside its set)");
}

}  // namespace trajattack::oracle
