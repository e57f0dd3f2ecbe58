#include "ddfabc/forest/loss.hpp"

#include <cmath>

#include "ddfabc/errors.hpp"

namespace ddfabc::forest {

double loss(double pred, double target, LossKind kind, double huber_delta) {
  const double e = pred - target;
  switch (kind) {
    case LossKind::kMse:
      return e * e;
    case LossKind::kMae:
      return std::abs(e);
    case LossKind::kHuber: {
      const double a = std::abs(e);
      return a <= huber_delta ? 0.5 * e * e : huber_delta * (a - 0.5 * huber_delta);
    }
  }
  throw ArgumentError("unknown loss kind");
}

double loss_derivative(double pred, double target, LossKind kind, double huber_delta) {
  const double e = pred - target;
  switch (kind) {
    case LossKind::kMse:
      return 2.0 * e;
    case LossKind::kMae:
      return e > 0.0 ? 1.0 : (e < 0.0 ? -1.0 : 0.0);
    case LossKind::kHuber:
      if (std::abs(e) <= huber_delta) return e;
      return e > 0.0 ? huber_delta : -huber_delta;
  }
  throw ArgumentError("unknown loss kind");
}

LossKind parse_loss_kind(std::string_view name) {
  if (name == "mse") return LossKind::kMse;
  if (name == "mae") return LossKind::kMae;
  if (name == "huber") return LossKind::kHuber;
  throw ArgumentError("unknown loss '" + std::string(name) + "' (mse, mae, huber)");
}

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kMse:
      return "mse";
    case LossKind::kMae:
      return "mae";
    case LossKind::kHuber:
      return "huber";
  }
  return "?";
}

LossComposition parse_loss_composition(std::string_view name) {
  if (name == "ensemble") return LossComposition::kEnsemble;
  if (name == "per_tree") return LossComposition::kPerTree;
  throw ArgumentError("unknown loss composition '" + std::string(name) + "' (ensemble, per_tree)");
}

std::string to_string(LossComposition c) { return c == LossComposition::kEnsemble ? "ensemble" : "per_tree"; }

}  // namespace ddfabc::forest
