#include <cmath>
#include <stdexcept>

#include "trajattack/oracle/oracle.hpp"

namespace trajattack::oracle {

Eigen::MatrixXd fd_jacobian(const PredictorSpec& spec, const Trajectory& past, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("fd_jacobian: h must be positive");
  const Eigen::VectorXd& x = past.coords();
  Eigen::MatrixXd jac(2 * spec.future, x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    Eigen::VectorXd plus = x;
    Eigen::VectorXd minus = x;
    plus[j] += h;
    minus[j] -= h;
    const Eigen::VectorXd fp = predict(spec, Trajectory(plus, past.dt())).coords();
    const Eigen::VectorXd fm = predict(spec, Trajectory(minus, past.dt())).coords();
    jac.col(j) = (fp - fm) / (2.0 * h);
  }
  if (!jac.allFinite()) throw std::runtime_error("fd_jacobian: non-finite difference quotient");
  return jac;
}

double reference_loss(const Trajectory& a, const Trajectory& b, const std::vector<double>& w) {
  double total = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) {
    const double dx = a.coords()[2 * m] - b.coords()[2 * m];
    const double dy = a.coords()[2 * m + 1] - b.coords()[2 * m + 1];
    total += w[m] * std::hypot(dx, dy);
  }
  return total;
}

Eigen::VectorXd fd_loss_gradient(const PredictorSpec& spec, const Trajectory& nominal,
                                 const Eigen::VectorXd& delta, const Trajectory& target,
                                 const std::vector<double>& weights, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("fd_loss_gradient: h must be positive");
  auto value = [&](const Eigen::VectorXd& d) {
    return reference_loss(predict(spec, Trajectory(Eigen::VectorXd(nominal.coords() + d), nominal.dt())),
                          target, weights);
  };
  Eigen::VectorXd grad(delta.size());
  for (Eigen::Index j = 0; j < delta.size(); ++j) {
    Eigen::VectorXd plus = delta;
    Eigen::VectorXd minus = delta;
    plus[j] += h;
    minus[j] -= h;
    grad[j] = (value(plus) - value(minus)) / (2.0 * h);
  }
  return grad;
}

}  // namespace trajattack::oracle
