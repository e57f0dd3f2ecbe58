#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ddfabc/errors.hpp"
#include "ddfabc/forest/loss.hpp"

namespace ddfabc::forest {

namespace {

// Forward state of every tree for one sample.
struct Scratch {
  explicit Scratch(const ForestShape& s)
      : inner(s.internal_nodes()),
        gates(static_cast<std::size_t>(s.n_trees) * inner),
        reach(static_cast<std::size_t>(s.n_trees) * (2 * inner + 1)),
        values(static_cast<std::size_t>(2 * inner + 1)),
        outputs(static_cast<std::size_t>(s.n_trees)) {}

  int inner;
  std::vector<double> gates;
  std::vector<double> reach;
  std::vector<double> values;
  std::vector<double> outputs;
};

void forward_all(const Forest& f, std::span<const double> x, Scratch& s) {
  const int inner = s.inner;
  const int m = f.n_features();
  for (int k = 0; k < f.n_trees(); ++k) {
    const TreeView t = f.tree(k);
    double* g = &s.gates[static_cast<std::size_t>(k) * inner];
    double* reach = &s.reach[static_cast<std::size_t>(k) * (2 * inner + 1)];
    reach[0] = 1.0;
    for (int n = 0; n < inner; ++n) {
      const double* a = t.weights.data() + static_cast<std::size_t>(n) * m;
      double z = -t.thresholds[n];
      for (int i = 0; i < m; ++i) z += a[i] * x[i];
      g[n] = sigmoid(z);
      reach[2 * n + 1] = reach[n] * g[n];
      reach[2 * n + 2] = reach[n] * (1.0 - g[n]);
    }
    double y = 0.0;
    for (int j = 0; j < t.leaf_count(); ++j) y += reach[inner + j] * t.leaves[j];
    s.outputs[k] = y;
  }
}

double sample_loss(const Scratch& s, double target, const Objective& obj, std::span<double> tree_grad) {
  const std::size_t k_count = s.outputs.size();
  const double inv_k = 1.0 / static_cast<double>(k_count);
  if (obj.composition == LossComposition::kEnsemble) {
    const double yhat = std::accumulate(s.outputs.begin(), s.outputs.end(), 0.0) * inv_k;
    const double d = loss_derivative(yhat, target, obj.kind, obj.huber_delta) * inv_k;
    std::fill(tree_grad.begin(), tree_grad.end(), d);
    return loss(yhat, target, obj.kind, obj.huber_delta);
  }
  double l = 0.0;
  for (std::size_t k = 0; k < k_count; ++k) {
    l += loss(s.outputs[k], target, obj.kind, obj.huber_delta);
    tree_grad[k] = loss_derivative(s.outputs[k], target, obj.kind, obj.huber_delta) * inv_k;
  }
  return l * inv_k;
}

double l1_term(const Forest& f) {
  double s = 0.0;
  for (int k = 0; k < f.n_trees(); ++k) {
    for (double a : f.tree(k).weights) s += std::abs(a);
  }
  return s;
}

void check(const Forest& f, const DataView& data) {
  if (data.n_features != f.n_features()) throw ArgumentError("data feature count does not match the forest");
  if (data.features.size() != data.rows() * static_cast<std::size_t>(data.n_features)) {
    throw ArgumentError("feature matrix size does not match the target count");
  }
}

}  // namespace

double batch_loss(const Forest& forest, const DataView& data, std::span<const std::size_t> rows,
                  const Objective& objective) {
  check(forest, data);
  const std::size_t n = rows.empty() ? data.rows() : rows.size();
  if (n == 0) throw ArgumentError("batch_loss: empty batch");
  Scratch s(forest.shape());
  std::vector<double> tree_grad(static_cast<std::size_t>(forest.n_trees()));
  double total = 0.0;
  for (std::size_t b = 0; b < n; ++b) {
    const std::size_t r = rows.empty() ? b : rows[b];
    forward_all(forest, data.row(r), s);
    total += sample_loss(s, data.targets[r], objective, tree_grad);
  }
  double l = total / static_cast<double>(n);
  if (objective.l1 != 0.0) l += objective.l1 * l1_term(forest);
  return l;
}

double backward(const Forest& forest, const DataView& data, std::span<const std::size_t> rows,
                const Objective& objective, std::span<double> grad) {
  check(forest, data);
  if (rows.empty()) throw ArgumentError("backward: empty batch");
  if (grad.size() != forest.parameters().size()) throw ArgumentError("backward: gradient size mismatch");
  std::fill(grad.begin(), grad.end(), 0.0);

  const ForestShape& shape = forest.shape();
  const int inner = shape.internal_nodes();
  const int leaves = shape.leaf_count();
  const int m = shape.n_features;
  Scratch s(shape);
  std::vector<double> tree_grad(static_cast<std::size_t>(shape.n_trees));
  double total = 0.0;

  for (const std::size_t r : rows) {
    const auto x = data.row(r);
    forward_all(forest, x, s);
    total += sample_loss(s, data.targets[r], objective, tree_grad);

    for (int k = 0; k < shape.n_trees; ++k) {
      const double dy = tree_grad[k];
      if (dy == 0.0) continue;
      const TreeView t = forest.tree(k);
      const double* g = &s.gates[static_cast<std::size_t>(k) * inner];
      const double* reach = &s.reach[static_cast<std::size_t>(k) * (2 * inner + 1)];
      double* block = grad.data() + k * shape.tree_block();
      double* d_weights = block;
      double* d_thresholds = block + static_cast<std::size_t>(inner) * m;
      double* d_leaves = d_thresholds + inner;

      for (int j = 0; j < leaves; ++j) {
        s.values[inner + j] = t.leaves[j];
        d_leaves[j] += dy * reach[inner + j];
      }
      // Subtree means bottom-up; d(tree)/d(g_n) = reach_n (V_left - V_right).
      for (int n = inner - 1; n >= 0; --n) {
        const double vl = s.values[2 * n + 1];
        const double vr = s.values[2 * n + 2];
        s.values[n] = g[n] * vl + (1.0 - g[n]) * vr;
        const double dz = dy * reach[n] * (vl - vr) * g[n] * (1.0 - g[n]);
        if (dz == 0.0) continue;
        double* da = d_weights + static_cast<std::size_t>(n) * m;
        for (int i = 0; i < m; ++i) da[i] += dz * x[i];
        d_thresholds[n] -= dz;
      }
    }
  }

  const double scale = 1.0 / static_cast<double>(rows.size());
  for (double& v : grad) v *= scale;
  double l = total * scale;

  if (objective.l1 != 0.0) {
    for (int k = 0; k < shape.n_trees; ++k) {
      const TreeView t = forest.tree(k);
      double* d_weights = grad.data() + k * shape.tree_block();
      for (std::size_t i = 0; i < t.weights.size(); ++i) {
        const double a = t.weights[i];
        d_weights[i] += objective.l1 * (a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0));
      }
    }
    l += objective.l1 * l1_term(forest);
  }
  return l;
}

}  // namespace ddfabc::forest
