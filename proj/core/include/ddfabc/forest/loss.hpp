#pragma once

#include <span>
#include <string>
#include <string_view>

#include "ddfabc/forest/forest.hpp"

namespace ddfabc::forest {

/// mse: e^2; mae: |e|; huber: e^2/2 for |e| <= delta, else delta (|e| - delta/2).
double loss(double pred, double target, LossKind kind, double huber_delta = 1.0);

/// d loss / d pred. The mae subgradient at e = 0 is taken as 0.
double loss_derivative(double pred, double target, LossKind kind, double huber_delta = 1.0);

LossKind parse_loss_kind(std::string_view name);
std::string to_string(LossKind kind);

/// How the K trees enter the objective: loss of the averaged prediction, or
/// the average of each tree's own loss.
enum class LossComposition { kEnsemble, kPerTree };

LossComposition parse_loss_composition(std::string_view name);
std::string to_string(LossComposition c);

struct Objective {
  LossKind kind = LossKind::kMse;
  double huber_delta = 1.0;
  LossComposition composition = LossComposition::kEnsemble;
  double l1 = 0.0;  // penalty on |A|
};

/// Row-major feature matrix plus targets, both already normalized.
struct DataView {
  std::span<const double> features;
  std::span<const double> targets;
  int n_features = 0;

  std::size_t rows() const { return targets.size(); }
  std::span<const double> row(std::size_t r) const {
    return features.subspan(r * static_cast<std::size_t>(n_features), static_cast<std::size_t>(n_features));
  }
};

/// Mean objective over the listed rows (all rows when `rows` is empty),
/// including the L1 term.
double batch_loss(const Forest& forest, const DataView& data, std::span<const std::size_t> rows,
                  const Objective& objective);

/// Writes d(batch_loss)/d(parameters) into `grad` (same layout as
/// Forest::parameters()) and returns the batch loss. Throws ArgumentError
/// on an empty batch or a size mismatch.
double backward(const Forest& forest, const DataView& data, std::span<const std::size_t> rows,
                const Objective& objective, std::span<double> grad);

}  // namespace ddfabc::forest
