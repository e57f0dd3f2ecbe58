#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ddfabc::forest {

enum class OptimizerKind { kSgd, kAdam, kQhAdam };

OptimizerKind parse_optimizer_kind(std::string_view name);
std::string to_string(OptimizerKind kind);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kQhAdam;
  double learning_rate = 1e-3;
  double beta1 = 0.995;
  double beta2 = 0.999;
  double nu1 = 0.7;  // qhadam only
  double nu2 = 1.0;  // qhadam only
  double epsilon = 1e-8;

  /// Adam's usual moments (0.9, 0.999).
  static OptimizerConfig adam(double lr);
  /// QHAdam with the recommended (nu1, beta1, nu2, beta2) = (0.7, 0.995, 1, 0.999).
  static OptimizerConfig qhadam(double lr);
  static OptimizerConfig sgd(double lr);

  void validate() const;
};

/// First-order optimizer with its moment state. For Adam and QHAdam the
/// moments are bias-corrected:
///   m <- b1 m + (1 - b1) g,  v <- b2 v + (1 - b2) g^2
///   adam:   theta -= lr * m_hat / (sqrt(v_hat) + eps)
///   qhadam: theta -= lr * ((1 - nu1) g + nu1 m_hat) / (sqrt((1 - nu2) g^2 + nu2 v_hat) + eps)
class Optimizer {
 public:
  Optimizer(OptimizerConfig config, std::size_t n_params);

  /// Throws ArgumentError if params/grad sizes differ from the state.
  void step(std::span<double> params, std::span<const double> grad);

  const OptimizerConfig& config() const { return config_; }
  std::int64_t steps() const { return t_; }

 private:
  OptimizerConfig config_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::int64_t t_ = 0;
};

}  // namespace ddfabc::forest
