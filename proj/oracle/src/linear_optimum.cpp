#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "trajattack/oracle/oracle.hpp"

namespace trajattack::oracle {

LinearOptimum linear_attack_optimum(const PredictorSpec& cv, const Trajectory& nominal,
                                    const Trajectory& target, const std::vector<double>& weights) {
  if (cv.kind != PredictorKind::ConstantVelocity) {
    throw std::invalid_argument("linear_attack_optimum needs the constant-velocity predictor");
  }
  const std::size_t n = nominal.size();
  const std::size_t f = target.size();
  const Eigen::Vector2d last = nominal.state(n - 1);
  const Eigen::Vector2d prev = nominal.state(n - 2);

  // Forecast k under perturbation z = (d_prev, d_last):
  //   last + k (last - prev) + (1 + k) d_last - k d_prev,
  // so residual_k = A_k z - b_k with A_k = [-k I, (1 + k) I].
  std::vector<Eigen::Matrix<double, 2, 4>> a(f);
  std::vector<Eigen::Vector2d> b(f);
  for (std::size_t m = 0; m < f; ++m) {
    const double k = static_cast<double>(m + 1);
    a[m].setZero();
    a[m].block<2, 2>(0, 0) = -k * Eigen::Matrix2d::Identity();
    a[m].block<2, 2>(0, 2) = (1.0 + k) * Eigen::Matrix2d::Identity();
    b[m] = target.state(m) - (last + k * (last - prev));
  }
  auto objective = [&](const Eigen::Vector4d& z) {
    double total = 0.0;
    for (std::size_t m = 0; m < f; ++m) total += weights[m] * (a[m] * z - b[m]).norm();
    return total;
  };

  // Reweighted least squares on the smoothed objective
  // sum_m w_m sqrt(||r_m||^2 + eps^2), a majorize-minimize scheme that
  // decreases it monotonically. Plain Weiszfeld weights (eps = 0) can lock a
  // zero residual in place at a non-optimal point, so eps is annealed down
  // to 1e-12; the smoothed optimum is within sum(w) * eps of the true one.
  Eigen::Vector4d z = Eigen::Vector4d::Zero();
  int it = 0;
  for (double eps = 1.0; eps >= 1e-12; eps *= 0.1) {
    for (int stage_it = 0; stage_it < 20000; ++stage_it, ++it) {
      Eigen::Matrix4d normal = Eigen::Matrix4d::Zero();
      Eigen::Vector4d rhs = Eigen::Vector4d::Zero();
      for (std::size_t m = 0; m < f; ++m) {
        const double r = (a[m] * z - b[m]).norm();
        const double omega = weights[m] / std::sqrt(r * r + eps * eps);
        normal += omega * a[m].transpose() * a[m];
        rhs += omega * a[m].transpose() * b[m];
      }
      const Eigen::Vector4d next = normal.ldlt().solve(rhs);
      const double change = (next - z).norm();
      z = next;
      if (change < 1e-15 * std::max(1.0, z.norm())) break;
    }
  }

  LinearOptimum out;
  out.delta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * n));
  out.delta.segment<2>(static_cast<Eigen::Index>(2 * (n - 2))) = z.head<2>();
  out.delta.segment<2>(static_cast<Eigen::Index>(2 * (n - 1))) = z.tail<2>();
  out.loss = objective(z);
  out.iterations = it;
  return out;
}

}  // namespace trajattack::oracle
