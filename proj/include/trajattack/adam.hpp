#pragma once

#include <Eigen/Core>

namespace trajattack {

/// Adam first-order optimizer over a flat parameter vector.
///
/// One instance owns the moment estimates for one parameter block; the
/// learning rate is passed per step so callers can run their own schedule.
class Adam {
 public:
  struct Options {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
  };

  explicit Adam(Eigen::Index size) : Adam(size, Options{}) {}
  Adam(Eigen::Index size, Options options);

  /// params -= lr * m_hat / (sqrt(v_hat) + epsilon)
  void step(Eigen::Ref<Eigen::VectorXd> params, const Eigen::Ref<const Eigen::VectorXd>& grad,
            double learning_rate);

  void reset();
  long steps_taken() const { return t_; }
  const Options& options() const { return options_; }

 private:
  Options options_;
  Eigen::VectorXd m_;
  Eigen::VectorXd v_;
  long t_ = 0;
};

}  // namespace trajattack
