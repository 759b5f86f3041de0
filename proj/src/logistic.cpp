#include <cmath>
#include <limits>

#include "limeout/classifier.hpp"

namespace limeout {
namespace detail {

namespace {

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  double e = std::exp(t);
  return e / (1.0 + e);
}

// log(1 + e^t) without overflow.
double softplus(double t) {
  if (t > 0.0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

}  // namespace

LossGrad logistic_loss_grad(const Matrix& x, std::span<const int> sign,
                            std::span<const double> weights, double intercept,
                            double lambda) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  LossGrad out;
  out.grad_weights.assign(d, 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    auto row = x.row(i);
    double z = intercept;
    for (std::size_t j = 0; j < d; ++j) z += weights[j] * row[j];
    double s = static_cast<double>(sign[i]);
    loss += softplus(-s * z);
    // d/dz softplus(-s z) = -s * sigmoid(-s z)
    double r = -s * sigmoid(-s * z);
    for (std::size_t j = 0; j < d; ++j) out.grad_weights[j] += r * row[j];
    out.grad_intercept += r;
  }
  double inv_n = 1.0 / static_cast<double>(n);
  double penalty = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    penalty += weights[j] * weights[j];
    out.grad_weights[j] = out.grad_weights[j] * inv_n + lambda * inv_n * weights[j];
  }
  out.grad_intercept *= inv_n;
  out.loss = loss * inv_n + 0.5 * lambda * inv_n * penalty;
  return out;
}

// Batch gradient descent on the regularized log-loss; stops when the loss
// improvement falls below the tolerance or iterations run out.
LogisticUnit fit_logistic_unit(const Matrix& x, std::span<const int> sign,
                               double lambda, double learning_rate,
                               int max_iterations, double tolerance) {
  LogisticUnit unit;
  unit.weights.assign(x.cols(), 0.0);
  unit.intercept = 0.0;
  double previous = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iterations; ++it) {
    LossGrad lg = logistic_loss_grad(x, sign, unit.weights, unit.intercept,
                                     lambda);
    if (std::abs(previous - lg.loss) < tolerance) break;
    previous = lg.loss;
    for (std::size_t j = 0; j < unit.weights.size(); ++j)
      unit.weights[j] -= learning_rate * lg.grad_weights[j];
    unit.intercept -= learning_rate * lg.grad_intercept;
  }
  return unit;
}

}  // namespace detail
}  // namespace limeout
