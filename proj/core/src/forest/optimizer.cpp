#include "ddfabc/forest/optimizer.hpp"

#include <cmath>

#include "ddfabc/errors.hpp"

namespace ddfabc::forest {

OptimizerKind parse_optimizer_kind(std::string_view name) {
  if (name == "sgd") return OptimizerKind::kSgd;
  if (name == "adam") return OptimizerKind::kAdam;
  if (name == "qhadam") return OptimizerKind::kQhAdam;
  throw ArgumentError("unknown optimizer '" + std::string(name) + "' (sgd, adam, qhadam)");
}

std::string to_string(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::kSgd:
      return "sgd";
    case OptimizerKind::kAdam:
      return "adam";
    case OptimizerKind::kQhAdam:
      return "qhadam";
  }
  return "?";
}

OptimizerConfig OptimizerConfig::adam(double lr) {
  OptimizerConfig c;
  c.kind = OptimizerKind::kAdam;
  c.learning_rate = lr;
  c.beta1 = 0.9;
  c.beta2 = 0.999;
  return c;
}

OptimizerConfig OptimizerConfig::qhadam(double lr) {
  OptimizerConfig c;
  c.kind = OptimizerKind::kQhAdam;
  c.learning_rate = lr;
  return c;
}

OptimizerConfig OptimizerConfig::sgd(double lr) {
  OptimizerConfig c;
  c.kind = OptimizerKind::kSgd;
  c.learning_rate = lr;
  return c;
}

void OptimizerConfig::validate() const {
  if (!(learning_rate >= 0.0)) throw ArgumentError("optimizer: learning rate must be >= 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw ArgumentError("optimizer: betas must lie in [0, 1)");
  }
  if (!(nu1 >= 0.0 && nu1 <= 1.0) || !(nu2 >= 0.0 && nu2 <= 1.0)) {
    throw ArgumentError("optimizer: nu1 and nu2 must lie in [0, 1]");
  }
  if (!(epsilon > 0.0)) throw ArgumentError("optimizer: epsilon must be positive");
}

Optimizer::Optimizer(OptimizerConfig config, std::size_t n_params) : config_(config) {
  config_.validate();
  if (config_.kind != OptimizerKind::kSgd) {
    m_.assign(n_params, 0.0);
    v_.assign(n_params, 0.0);
  } else {
    m_.resize(n_params);  // only the size is used, for shape checks
  }
}

void Optimizer::step(std::span<double> params, std::span<const double> grad) {
  if (params.size() != m_.size() || grad.size() != m_.size()) {
    throw ArgumentError("optimizer: parameter/gradient shape does not match optimizer state");
  }
  ++t_;
  const double lr = config_.learning_rate;
  if (config_.kind == OptimizerKind::kSgd) {
    for (std::size_t i = 0; i < params.size(); ++i) params[i] -= lr * grad[i];
    return;
  }
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double bc1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  const double eps = config_.epsilon;
  if (config_.kind == OptimizerKind::kAdam) {
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double g = grad[i];
      m_[i] = b1 * m_[i] + (1.0 - b1) * g;
      v_[i] = b2 * v_[i] + (1.0 - b2) * g * g;
      const double m_hat = m_[i] / bc1;
      const double v_hat = v_[i] / bc2;
      params[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
    }
    return;
  }
  const double nu1 = config_.nu1;
  const double nu2 = config_.nu2;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grad[i];
    m_[i] = b1 * m_[i] + (1.0 - b1) * g;
    v_[i] = b2 * v_[i] + (1.0 - b2) * g * g;
    const double m_hat = m_[i] / bc1;
    const double v_hat = v_[i] / bc2;
    const double num = (1.0 - nu1) * g + nu1 * m_hat;
    const double den = std::sqrt((1.0 - nu2) * g * g + nu2 * v_hat) + eps;
    params[i] -= lr * num / den;
  }
}

}  // namespace ddfabc::forest
