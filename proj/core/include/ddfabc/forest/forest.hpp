#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ddfabc::forest {

enum class LossKind : std::uint32_t { kMse = 0, kMae = 1, kHuber = 2 };

/// Read-only view of one soft tree of depth d over M features.
///
/// Internal nodes are numbered in heap order (root 0, children 2n+1 and
/// 2n+2); leaf j is the j-th node of the last level, left to right. The gate
/// of node n is the probability of routing to its LEFT child.
struct TreeView {
  int depth = 1;
  int n_features = 0;
  std::span<const double> weights;     // internal_nodes x n_features, node-major
  std::span<const double> thresholds;  // internal_nodes
  std::span<const double> leaves;      // leaf_count

  int internal_nodes() const { return (1 << depth) - 1; }
  int leaf_count() const { return 1 << depth; }
  std::span<const double> node_weights(int node) const {
    return weights.subspan(static_cast<std::size_t>(node) * n_features, n_features);
  }
};

/// Owning single tree, mostly for tests and tooling.
struct TreeParams {
  int depth = 1;
  int n_features = 0;
  std::vector<double> weights;
  std::vector<double> thresholds;
  std::vector<double> leaves;

  TreeParams() = default;
  TreeParams(int depth, int n_features);

  int internal_nodes() const { return (1 << depth) - 1; }
  int leaf_count() const { return 1 << depth; }

  /// Throws ArgumentError on inconsistent sizes or non-finite entries.
  void validate() const;

  TreeView view() const { return {depth, n_features, weights, thresholds, leaves}; }
  operator TreeView() const { return view(); }  // NOLINT(google-explicit-constructor)
};

struct ForestShape {
  int n_trees = 32;
  int depth = 6;
  int n_features = 0;

  int internal_nodes() const { return (1 << depth) - 1; }
  int leaf_count() const { return 1 << depth; }
  /// Parameters per tree: weights, thresholds, leaves.
  std::size_t tree_block() const {
    return static_cast<std::size_t>(internal_nodes()) * (n_features + 1) + leaf_count();
  }
  std::size_t parameter_count() const { return tree_block() * n_trees; }

  void validate() const;
  bool operator==(const ForestShape&) const = default;
};

/// Ensemble of K soft trees sharing one feature space. All parameters live
/// in one flat vector, tree after tree, each block laid out as
/// [weights | thresholds | leaves].
class Forest {
 public:
  Forest() = default;
  explicit Forest(ForestShape shape);

  const ForestShape& shape() const { return shape_; }
  int n_trees() const { return shape_.n_trees; }
  int depth() const { return shape_.depth; }
  int n_features() const { return shape_.n_features; }

  TreeView tree(int k) const;
  std::span<double> tree_weights(int k);
  std::span<double> tree_thresholds(int k);
  std::span<double> tree_leaves(int k);

  std::vector<double>& parameters() { return params_; }
  const std::vector<double>& parameters() const { return params_; }

  /// z-score statistics applied to raw inputs by forest_predict.
  std::vector<double>& feature_mean() { return mean_; }
  const std::vector<double>& feature_mean() const { return mean_; }
  std::vector<double>& feature_std() { return std_; }
  const std::vector<double>& feature_std() const { return std_; }

  LossKind loss_kind() const { return loss_kind_; }
  void set_loss_kind(LossKind kind) { loss_kind_ = kind; }

  bool operator==(const Forest&) const = default;

 private:
  ForestShape shape_{};
  std::vector<double> params_;
  std::vector<double> mean_;
  std::vector<double> std_;
  LossKind loss_kind_ = LossKind::kMse;
};

/// Logistic sigmoid, evaluated without overflow for large |z|.
double sigmoid(double z);

/// sigma(A . x - b): probability of taking the left branch.
double gate(std::span<const double> weights, std::span<const double> x, double threshold);

/// Path probabilities of all leaves, p_j = product of g (left turns) and
/// 1 - g (right turns) along the root-to-leaf path.
std::vector<double> leaf_probabilities(const TreeView& tree, std::span<const double> x);

/// sum_j p_j Q_j.
double tree_predict(const TreeView& tree, std::span<const double> x);

/// Mean of the tree outputs on an already-normalized input.
double forest_predict_normalized(const Forest& forest, std::span<const double> x);

/// z-scores `x` with the forest's statistics and averages the trees.
/// Throws ArgumentError when x has the wrong length.
double forest_predict(const Forest& forest, std::span<const double> x);

/// Scratch space for repeated predictions without allocation.
class Predictor {
 public:
  explicit Predictor(const Forest& forest);
  double operator()(std::span<const double> x);

 private:
  const Forest* forest_;
  std::vector<double> normalized_;
  std::vector<double> reach_;
};

}  // namespace ddfabc::forest
