#pragma once

// Reference computations used by the test suites to check the main library.
// Nothing here calls the library's kinematics, feasibility, projection or
// loss code; only the data types and predict() (the function under
// differentiation) are shared.

#include <string>
#include <vector>

#include <Eigen/Core>

#include "trajattack/constraints.hpp"
#include "trajattack/predictor.hpp"
#include "trajattack/trajectory.hpp"
#include "trajattack/weights.hpp"

namespace trajattack::oracle {

/// Central differences of predict(): column j is
/// (predict(x + h e_j) - predict(x - h e_j)) / 2h. Throws on non-finite output.
Eigen::MatrixXd fd_jacobian(const PredictorSpec& spec, const Trajectory& past, double h);

/// Central differences of J(Delta) = sum_m w_m ||f(X + Delta)_m - Y_m||.
Eigen::VectorXd fd_loss_gradient(const PredictorSpec& spec, const Trajectory& nominal,
                                 const Eigen::VectorXd& delta, const Trajectory& target,
                                 const std::vector<double>& weights, double h);

/// sum_m w_m ||a_m - b_m||, written out independently.
double reference_loss(const Trajectory& a, const Trajectory& b, const std::vector<double>& w);

/// Straightforward re-derivation of the feasibility test from its definition.
bool reference_feasible(const ConstraintSet& cs, const Trajectory& candidate);

struct ThetaOracle {
  std::vector<double> theta;
  double sum = 0.0;
  std::string method = "exhaustive grid enumeration";
};

/// Global maximizer of sum(theta) over {0, 1/G, ..., 1}^n subject to
/// feasibility of nominal + theta o delta. Among maximizers the
/// lexicographically largest theta is returned. Requires n <= 4.
ThetaOracle brute_force_theta(const ConstraintSet& cs, const Eigen::VectorXd& delta, int grid);

struct LinearOptimum {
  Eigen::VectorXd delta;  // interleaved, nonzero only on the last two states
  double loss = 0.0;
  int iterations = 0;
  std::string method = "iteratively reweighted least squares";
};

/// Unconstrained minimizer of the weighted loss for the constant-velocity
/// predictor, whose forecast is affine in the perturbation.
LinearOptimum linear_attack_optimum(const PredictorSpec& cv, const Trajectory& nominal,
                                    const Trajectory& target, const std::vector<double>& weights);

}  // namespace trajattack::oracle
