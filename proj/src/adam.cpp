#include "trajattack/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace trajattack {

Adam::Adam(Eigen::Index size, Options options)
    : options_(options), m_(Eigen::VectorXd::Zero(size)), v_(Eigen::VectorXd::Zero(size)) {
  if (!(options.beta1 >= 0.0 && options.beta1 < 1.0) ||
      !(options.beta2 >= 0.0 && options.beta2 < 1.0) || !(options.epsilon > 0.0)) {
    throw std::invalid_argument("Adam: need beta1, beta2 in [0, 1) and epsilon > 0");
  }
}

void Adam::step(Eigen::Ref<Eigen::VectorXd> params, const Eigen::Ref<const Eigen::VectorXd>& grad,
                double learning_rate) {
  if (params.size() != m_.size() || grad.size() != m_.size()) {
    throw std::invalid_argument("Adam: parameter/gradient size mismatch");
  }
  ++t_;
  const double b1 = options_.beta1;
  const double b2 = options_.beta2;
  m_ = b1 * m_ + (1.0 - b1) * grad;
  v_ = b2 * v_ + (1.0 - b2) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  for (Eigen::Index i = 0; i < params.size(); ++i) {
    const double m_hat = m_[i] / c1;
    const double v_hat = v_[i] / c2;
    params[i] -= learning_rate * m_hat / (std::sqrt(v_hat) + options_.epsilon);
  }
}

void Adam::reset() {
  m_.setZero();
  v_.setZero();
  t_ = 0;
}

}  // namespace trajattack
