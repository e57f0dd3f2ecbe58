#include "ddfabc/forest/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ddfabc/errors.hpp"

namespace ddfabc::forest {

void TrainConfig::validate() const {
  optimizer.validate();
  if (!(optimizer.learning_rate > 0.0)) throw ArgumentError("train: learning rate must be positive");
  if (batch_size < 1) throw ArgumentError("train: batch size must be >= 1");
  if (epochs < 1) throw ArgumentError("train: epochs must be >= 1");
  if (patience < 1) throw ArgumentError("train: patience must be >= 1");
  if (!(objective.huber_delta > 0.0)) throw ArgumentError("train: huber delta must be positive");
  if (!(objective.l1 >= 0.0)) throw ArgumentError("train: l1 weight must be >= 0");
}

void column_stats(const RawData& data, std::vector<double>& mean, std::vector<double>& stdev) {
  const std::size_t m = static_cast<std::size_t>(data.n_features);
  const std::size_t n = data.rows();
  mean.assign(m, 0.0);
  stdev.assign(m, 0.0);
  if (n == 0) return;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m; ++c) mean[c] += data.features[r * m + c];
  }
  for (double& v : mean) v /= static_cast<double>(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      const double d = data.features[r * m + c] - mean[c];
      stdev[c] += d * d;
    }
  }
  for (double& v : stdev) {
    v = std::sqrt(v / static_cast<double>(n));
    if (!(v > 0.0)) v = 1.0;
  }
}

namespace {

struct Normalized {
  std::vector<double> features;
  std::vector<double> targets;
  int n_features = 0;

  DataView view() const { return {features, targets, n_features}; }
};

Normalized normalize(const RawData& raw, const std::vector<double>& mean, const std::vector<double>& stdev,
                     double t_mean, double t_std) {
  Normalized out;
  out.n_features = raw.n_features;
  out.features.resize(raw.features.size());
  const std::size_t m = static_cast<std::size_t>(raw.n_features);
  for (std::size_t i = 0; i < raw.features.size(); ++i) {
    const std::size_t c = i % m;
    out.features[i] = (raw.features[i] - mean[c]) / stdev[c];
  }
  out.targets.resize(raw.targets.size());
  for (std::size_t i = 0; i < raw.targets.size(); ++i) out.targets[i] = (raw.targets[i] - t_mean) / t_std;
  return out;
}

double mse_of(const Forest& f, const DataView& data) {
  Objective mse;
  return batch_loss(f, data, {}, mse);
}

void check_raw(const RawData& d, const char* what) {
  if (d.rows() == 0) throw ArgumentError(std::string("train: empty ") + what + " set");
  if (d.features.size() != d.rows() * static_cast<std::size_t>(d.n_features)) {
    throw ArgumentError(std::string("train: ") + what + " feature matrix has the wrong size");
  }
}

}  // namespace

void initialize(Forest& forest, const DataView& normalized, Rng& rng) {
  const ForestShape& s = forest.shape();
  const double bound = 1.0 / std::sqrt(static_cast<double>(s.n_features));
  const std::size_t n_probe = std::min<std::size_t>(256, normalized.rows());
  std::vector<std::size_t> probe(n_probe);
  for (auto& r : probe) r = static_cast<std::size_t>(uniform_index(rng, normalized.rows()));

  for (int k = 0; k < s.n_trees; ++k) {
    auto weights = forest.tree_weights(k);
    auto thresholds = forest.tree_thresholds(k);
    auto leaves = forest.tree_leaves(k);
    for (double& a : weights) a = uniform(rng, -bound, bound);
    for (int n = 0; n < s.internal_nodes(); ++n) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (std::size_t r : probe) {
        const auto x = normalized.row(r);
        double z = 0.0;
        for (int i = 0; i < s.n_features; ++i) z += weights[static_cast<std::size_t>(n) * s.n_features + i] * x[i];
        lo = std::min(lo, z);
        hi = std::max(hi, z);
      }
      thresholds[n] = n_probe == 0 ? 0.0 : uniform(rng, lo, hi);
    }
    std::fill(leaves.begin(), leaves.end(), 0.0);
  }
}

TrainResult train(const ForestShape& shape_in, const RawData& train_set, const RawData& valid_set,
                  const TrainConfig& config) {
  config.validate();
  check_raw(train_set, "training");
  check_raw(valid_set, "validation");
  if (train_set.n_features != valid_set.n_features) throw ArgumentError("train: feature counts differ");
  ForestShape shape = shape_in;
  shape.n_features = train_set.n_features;
  shape.validate();

  TrainResult result;
  std::vector<double> mean;
  std::vector<double> stdev;
  column_stats(train_set, mean, stdev);
  {
    std::vector<double> tm;
    std::vector<double> ts;
    column_stats({train_set.targets, train_set.targets, 1}, tm, ts);
    result.target_mean = tm[0];
    result.target_std = ts[0];
  }
  const Normalized tr = normalize(train_set, mean, stdev, result.target_mean, result.target_std);
  const Normalized va = normalize(valid_set, mean, stdev, result.target_mean, result.target_std);

  Rng rng(config.seed);
  Forest forest(shape);
  forest.set_loss_kind(config.objective.kind);
  initialize(forest, tr.view(), rng);

  Optimizer opt(config.optimizer, forest.parameters().size());
  std::vector<double> grad(forest.parameters().size());
  std::vector<std::size_t> order(tr.targets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  const double initial = batch_loss(forest, va.view(), {}, config.objective);
  result.initial_valid_loss = initial;
  result.best_valid_loss = initial;
  std::vector<double> best = forest.parameters();
  const double blowup = config.divergence_factor * std::max(initial, std::numeric_limits<double>::min());

  int stale = 0;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    shuffle(std::span<std::size_t>(order), rng);
    double train_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t len = std::min<std::size_t>(static_cast<std::size_t>(config.batch_size), order.size() - start);
      const std::span<const std::size_t> batch(order.data() + start, len);
      train_sum += backward(forest, tr.view(), batch, config.objective, grad);
      opt.step(forest.parameters(), grad);
      ++batches;
    }
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = train_sum / static_cast<double>(batches);
    rec.valid_loss = batch_loss(forest, va.view(), {}, config.objective);
    rec.valid_mse = config.objective.kind == LossKind::kMse && config.objective.l1 == 0.0 &&
                            config.objective.composition == LossComposition::kEnsemble
                        ? rec.valid_loss
                        : mse_of(forest, va.view());
    result.history.push_back(rec);
    if (config.on_epoch) config.on_epoch(epoch, rec.train_loss, rec.valid_loss);

    if (!std::isfinite(rec.valid_loss) || rec.valid_loss > blowup) {
      throw TrainingDivergedError("training diverged at epoch " + std::to_string(epoch) +
                                  ": validation loss " + std::to_string(rec.valid_loss));
    }
    if (rec.valid_loss < result.best_valid_loss) {
      result.best_valid_loss = rec.valid_loss;
      result.best_epoch = epoch;
      best = forest.parameters();
      stale = 0;
    } else if (++stale >= config.patience) {
      break;
    }
  }

  forest.parameters() = std::move(best);
  for (int k = 0; k < shape.n_trees; ++k) {
    for (double& q : forest.tree_leaves(k)) q = q * result.target_std + result.target_mean;
  }
  forest.feature_mean() = std::move(mean);
  forest.feature_std() = std::move(stdev);
  result.forest = std::move(forest);
  return result;
}

double normalized_mse(const Forest& forest, const RawData& data) {
  if (data.rows() == 0) throw ArgumentError("normalized_mse: empty data");
  Predictor predict(forest);
  const std::size_t m = static_cast<std::size_t>(data.n_features);
  double mean = 0.0;
  for (double t : data.targets) mean += t;
  mean /= static_cast<double>(data.rows());
  double var = 0.0;
  double err = 0.0;
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const double e = predict(data.features.subspan(r * m, m)) - data.targets[r];
    err += e * e;
    var += (data.targets[r] - mean) * (data.targets[r] - mean);
  }
  err /= static_cast<double>(data.rows());
  var /= static_cast<double>(data.rows());
  return var > 0.0 ? err / var : err;
}

}  // namespace ddfabc::forest
