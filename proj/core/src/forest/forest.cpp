#include "ddfabc/forest/forest.hpp"

#include <cmath>
#include <string>

#include "ddfabc/errors.hpp"

namespace ddfabc::forest {

namespace {

bool all_finite(const std::vector<double>& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Fills reach[0 .. 2I] with the probability of arriving at every heap node
// and returns the leaf mixture.
double evaluate(const TreeView& tree, std::span<const double> x, std::vector<double>& reach) {
  const int inner = tree.internal_nodes();
  reach.resize(static_cast<std::size_t>(2 * inner + 1));
  reach[0] = 1.0;
  for (int n = 0; n < inner; ++n) {
    const double g = sigmoid(dot(tree.node_weights(n), x) - tree.thresholds[n]);
    reach[2 * n + 1] = reach[n] * g;
    reach[2 * n + 2] = reach[n] * (1.0 - g);
  }
  double y = 0.0;
  for (int j = 0; j < tree.leaf_count(); ++j) y += reach[inner + j] * tree.leaves[j];
  return y;
}

}  // namespace

TreeParams::TreeParams(int d, int m)
    : depth(d),
      n_features(m),
      weights(static_cast<std::size_t>((1 << d) - 1) * m, 0.0),
      thresholds(static_cast<std::size_t>((1 << d) - 1), 0.0),
      leaves(static_cast<std::size_t>(1 << d), 0.0) {}

void TreeParams::validate() const {
  if (depth < 1 || depth > 20) throw ArgumentError("tree: depth must be in [1, 20]");
  if (n_features < 1) throw ArgumentError("tree: need at least one feature");
  if (weights.size() != static_cast<std::size_t>(internal_nodes()) * n_features ||
      thresholds.size() != static_cast<std::size_t>(internal_nodes()) ||
      leaves.size() != static_cast<std::size_t>(leaf_count())) {
    throw ArgumentError("tree: parameter sizes do not match depth and feature count");
  }
  if (!all_finite(weights) || !all_finite(thresholds) || !all_finite(leaves)) {
    throw ArgumentError("tree: non-finite parameter");
  }
}

void ForestShape::validate() const {
  if (n_trees < 1) throw ArgumentError("forest: need at least one tree");
  if (depth < 1 || depth > 20) throw ArgumentError("forest: depth must be in [1, 20]");
  if (n_features < 1) throw ArgumentError("forest: need at least one feature");
}

Forest::Forest(ForestShape shape)
    : shape_(shape),
      params_(shape.parameter_count(), 0.0),
      mean_(static_cast<std::size_t>(shape.n_features), 0.0),
      std_(static_cast<std::size_t>(shape.n_features), 1.0) {
  shape_.validate();
}

TreeView Forest::tree(int k) const {
  const std::size_t inner = static_cast<std::size_t>(shape_.internal_nodes());
  const std::size_t m = static_cast<std::size_t>(shape_.n_features);
  std::span<const double> block(params_.data() + k * shape_.tree_block(), shape_.tree_block());
  return {shape_.depth, shape_.n_features, block.subspan(0, inner * m), block.subspan(inner * m, inner),
          block.subspan(inner * (m + 1), static_cast<std::size_t>(shape_.leaf_count()))};
}

std::span<double> Forest::tree_weights(int k) {
  return {params_.data() + k * shape_.tree_block(),
          static_cast<std::size_t>(shape_.internal_nodes()) * shape_.n_features};
}

std::span<double> Forest::tree_thresholds(int k) {
  return {params_.data() + k * shape_.tree_block() +
              static_cast<std::size_t>(shape_.internal_nodes()) * shape_.n_features,
          static_cast<std::size_t>(shape_.internal_nodes())};
}

std::span<double> Forest::tree_leaves(int k) {
  return {params_.data() + k * shape_.tree_block() +
              static_cast<std::size_t>(shape_.internal_nodes()) * (shape_.n_features + 1),
          static_cast<std::size_t>(shape_.leaf_count())};
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double gate(std::span<const double> weights, std::span<const double> x, double threshold) {
  if (weights.size() != x.size()) throw ArgumentError("gate: weight and input lengths differ");
  return sigmoid(dot(weights, x) - threshold);
}

std::vector<double> leaf_probabilities(const TreeView& tree, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(tree.n_features)) throw ArgumentError("tree: wrong feature count");
  std::vector<double> reach;
  evaluate(tree, x, reach);
  const int inner = tree.internal_nodes();
  return {reach.begin() + inner, reach.end()};
}

double tree_predict(const TreeView& tree, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(tree.n_features)) throw ArgumentError("tree: wrong feature count");
  std::vector<double> reach;
  return evaluate(tree, x, reach);
}

double forest_predict_normalized(const Forest& forest, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(forest.n_features())) {
    throw ArgumentError("forest: expected " + std::to_string(forest.n_features()) + " features, got " +
                        std::to_string(x.size()));
  }
  std::vector<double> reach;
  double sum = 0.0;
  for (int k = 0; k < forest.n_trees(); ++k) sum += evaluate(forest.tree(k), x, reach);
  return sum / forest.n_trees();
}

double forest_predict(const Forest& forest, std::span<const double> x) {
  Predictor p(forest);
  return p(x);
}

Predictor::Predictor(const Forest& forest)
    : forest_(&forest), normalized_(static_cast<std::size_t>(forest.n_features())) {}

double Predictor::operator()(std::span<const double> x) {
  const auto& f = *forest_;
  if (x.size() != normalized_.size()) {
    throw ArgumentError("forest: expected " + std::to_string(f.n_features()) + " features, got " +
                        std::to_string(x.size()));
  }
  for (std::size_t i = 0; i < x.size(); ++i) normalized_[i] = (x[i] - f.feature_mean()[i]) / f.feature_std()[i];
  double sum = 0.0;
  for (int k = 0; k < f.n_trees(); ++k) sum += evaluate(f.tree(k), normalized_, reach_);
  return sum / f.n_trees();
}

}  // namespace ddfabc::forest
