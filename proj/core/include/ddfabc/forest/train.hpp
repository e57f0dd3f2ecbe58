#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ddfabc/forest/forest.hpp"
#include "ddfabc/forest/loss.hpp"
#include "ddfabc/forest/optimizer.hpp"
#include "ddfabc/rng.hpp"

namespace ddfabc::forest {

struct TrainConfig {
  Objective objective{};
  OptimizerConfig optimizer = OptimizerConfig::qhadam(1e-3);
  int batch_size = 256;
  int epochs = 100;
  std::uint64_t seed = 1;
  int patience = 20;
  double divergence_factor = 1e6;
  /// Optional per-epoch hook (epoch, train loss, validation loss).
  std::function<void(int, double, double)> on_epoch;

  void validate() const;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double valid_loss = 0.0;
  double valid_mse = 0.0;  // in normalized target units
};

struct TrainResult {
  Forest forest;  // best-validation parameters, predicting raw targets
  std::vector<EpochRecord> history;
  int best_epoch = 0;            // 0 means the initial parameters were never beaten
  double best_valid_loss = 0.0;
  double initial_valid_loss = 0.0;
  double target_mean = 0.0;
  double target_std = 1.0;
};

/// Raw (unnormalized) supervised data, row-major.
struct RawData {
  std::span<const double> features;
  std::span<const double> targets;
  int n_features = 0;

  std::size_t rows() const { return targets.size(); }
};

/// Per-column mean and standard deviation; a zero deviation is replaced by 1.
void column_stats(const RawData& data, std::vector<double>& mean, std::vector<double>& stdev);

/// Random initialization: A ~ U(-1/sqrt(M), 1/sqrt(M)); b uniform over the
/// range of A . x on a probe batch of up to 256 rows; Q = 0.
void initialize(Forest& forest, const DataView& normalized, Rng& rng);

/// Minibatch training with early stopping on the validation loss. The
/// returned forest has the train-split z-score stats attached and its leaf
/// responses mapped back to target units, so forest_predict is
/// self-contained. Throws ArgumentError on empty sets and
/// TrainingDivergedError when validation loss exceeds divergence_factor
/// times its initial value.
TrainResult train(const ForestShape& shape, const RawData& train_set, const RawData& valid_set,
                  const TrainConfig& config);

/// Mean squared error of forest_predict against raw targets, divided by the
/// variance of those targets (1 when that variance is zero).
double normalized_mse(const Forest& forest, const RawData& data);

}  // namespace ddfabc::forest
