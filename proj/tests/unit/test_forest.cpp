#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "ddfabc/errors.hpp"
#include "ddfabc/forest/forest.hpp"
#include "ddfabc/forest/loss.hpp"
#include "ddfabc/forest/model_io.hpp"
#include "ddfabc/forest/optimizer.hpp"
#include "ddfabc/forest/train.hpp"
#include "ddfabc/rng.hpp"

using namespace ddfabc;
using namespace ddfabc::forest;

namespace {

TreeParams random_tree(Rng& rng, int depth, int m, double span = 2.0) {
  TreeParams t(depth, m);
  for (auto& w : t.weights) w = uniform(rng, -span, span);
  for (auto& b : t.thresholds) b = uniform(rng, -span, span);
  for (auto& q : t.leaves) q = uniform(rng, -span, span);
  return t;
}

std::vector<double> random_x(Rng& rng, int m) {
  std::vector<double> x(m);
  for (auto& v : x) v = uniform(rng, -3.0, 3.0);
  return x;
}

// Walks every root-to-leaf path explicitly.
std::vector<double> path_probabilities(const TreeParams& t, const std::vector<double>& x) {
  std::vector<double> p(t.leaf_count());
  for (int leaf = 0; leaf < t.leaf_count(); ++leaf) {
    double prob = 1.0;
    int node = 0;
    for (int level = 0; level < t.depth; ++level) {
      double z = -t.thresholds[node];
      for (int i = 0; i < t.n_features; ++i) z += t.weights[node * t.n_features + i] * x[i];
      const double g = 1.0 / (1.0 + std::exp(-z));
      const bool right = (leaf >> (t.depth - 1 - level)) & 1;
      prob *= right ? 1.0 - g : g;
      node = 2 * node + (right ? 2 : 1);
    }
    p[leaf] = prob;
  }
  return p;
}

double path_predict(const TreeParams& t, const std::vector<double>& x) {
  const auto p = path_probabilities(t, x);
  double s = 0.0;
  for (int j = 0; j < t.leaf_count(); ++j) s += p[j] * t.leaves[j];
  return s;
}

// Depth-1 tree over one feature whose gate is sigmoid(z) at x = 1.
TreeParams stump(double z, double q_left, double q_right) {
  TreeParams t(1, 1);
  t.weights = {z};
  t.thresholds = {0.0};
  t.leaves = {q_left, q_right};
  return t;
}

Forest random_forest(Rng& rng, ForestShape shape) {
  Forest f(shape);
  for (auto& v : f.parameters()) v = uniform(rng, -2.0, 2.0);
  return f;
}

struct Table {
  std::vector<double> x;
  std::vector<double> y;
  int m = 0;
  RawData raw() const { return {x, y, m}; }
};

Table linear_table(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Table t;
  t.m = 2;
  for (std::size_t r = 0; r < n; ++r) {
    const double a = uniform(rng, -1.0, 1.0);
    const double b = uniform(rng, -1.0, 1.0);
    t.x.push_back(a);
    t.x.push_back(b);
    t.y.push_back(3.0 * a - 2.0 * b + 1.0);
  }
  return t;
}

}  // namespace

TEST(Gate, Sigmoid) {
  EXPECT_EQ(sigmoid(0.0), 0.5);
  EXPECT_NEAR(sigmoid(std::log(3.0)), 0.75, 1e-15);
  EXPECT_NEAR(sigmoid(-50.0), 1.9287498479639178e-22, 1e-33);
  EXPECT_GT(sigmoid(-50.0), 0.0);
  EXPECT_EQ(sigmoid(1000.0), 1.0);
  EXPECT_GE(sigmoid(-1000.0), 0.0);
  EXPECT_FALSE(std::isnan(sigmoid(-1000.0)));
}

TEST(Gate, OnThresholdIsHalf) {
  const std::vector<double> a{1.0, -2.0}, x{3.0, 1.0};
  EXPECT_EQ(gate(a, x, 1.0), 0.5);
}

TEST(Tree, DepthOneHalfSplit) {
  const auto t = stump(0.0, 0.0, 0.0);
  const std::vector<double> x{1.0};
  const auto p = leaf_probabilities(t, x);
  EXPECT_EQ(p, (std::vector<double>{0.5, 0.5}));
}

TEST(Tree, DepthOnePrediction) {
  // g = 0.25 goes left with 1/4: 0.25 * 0 + 0.75 * 2.
  const auto t = stump(-std::log(3.0), 0.0, 2.0);
  const std::vector<double> x{1.0};
  EXPECT_NEAR(tree_predict(t, x), 1.5, 1e-15);
}

TEST(Tree, RightThenLeftLeaf) {
  Rng rng(3);
  const auto t = random_tree(rng, 2, 3);
  const auto x = random_x(rng, 3);
  const double g1 = gate(t.view().node_weights(0), x, t.thresholds[0]);
  const double g3 = gate(t.view().node_weights(2), x, t.thresholds[2]);
  EXPECT_NEAR(leaf_probabilities(t, x)[2], (1.0 - g1) * g3, 1e-15);
}

TEST(Tree, ConstantLeaves) {
  Rng rng(4);
  auto t = random_tree(rng, 4, 5);
  std::fill(t.leaves.begin(), t.leaves.end(), -1.25);
  for (int i = 0; i < 20; ++i) EXPECT_NEAR(tree_predict(t, random_x(rng, 5)), -1.25, 1e-14);
}

TEST(Tree, ProbabilitiesSumToOne) {
  Rng rng(5);
  for (int trial = 0; trial < 10000; ++trial) {
    const int d = 1 + static_cast<int>(uniform_index(rng, 6));
    const int m = 1 + static_cast<int>(uniform_index(rng, 8));
    const auto t = random_tree(rng, d, m);
    const auto p = leaf_probabilities(t, random_x(rng, m));
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
  }
}

TEST(Tree, MatchesPathEnumeration) {
  Rng rng(6);
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = 1 + static_cast<int>(uniform_index(rng, 6));
    const int m = 1 + static_cast<int>(uniform_index(rng, 8));
    const auto t = random_tree(rng, d, m);
    const auto x = random_x(rng, m);
    const double want = path_predict(t, x);
    EXPECT_NEAR(tree_predict(t, x), want, 1e-12 * std::max(1.0, std::abs(want)));
    const auto p = leaf_probabilities(t, x);
    const auto q = path_probabilities(t, x);
    for (std::size_t j = 0; j < p.size(); ++j) EXPECT_NEAR(p[j], q[j], 1e-12);
  }
}

TEST(Tree, OutputWithinLeafRange) {
  Rng rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto t = random_tree(rng, 3, 4, 5.0);
    const double y = tree_predict(t, random_x(rng, 4));
    const auto [lo, hi] = std::minmax_element(t.leaves.begin(), t.leaves.end());
    EXPECT_GE(y, *lo - 1e-12);
    EXPECT_LE(y, *hi + 1e-12);
  }
}

TEST(Tree, ValidateCatchesBadShapes) {
  TreeParams t(2, 3);
  EXPECT_NO_THROW(t.validate());
  t.leaves.pop_back();
  EXPECT_THROW(t.validate(), ArgumentError);
  TreeParams u(2, 3);
  u.weights[0] = std::nan("");
  EXPECT_THROW(u.validate(), ArgumentError);
}

TEST(Ensemble, MeanOfTwoTrees) {
  Forest f({2, 1, 1});
  auto l0 = f.tree_leaves(0);
  auto l1 = f.tree_leaves(1);
  std::fill(l0.begin(), l0.end(), 1.0);
  std::fill(l1.begin(), l1.end(), 3.0);
  const std::vector<double> x{0.3};
  EXPECT_EQ(forest_predict(f, x), 2.0);
}

TEST(Ensemble, SingleTreeIsTreePredict) {
  Rng rng(8);
  const auto f = random_forest(rng, {1, 3, 4});
  const auto x = random_x(rng, 4);
  EXPECT_EQ(forest_predict(f, x), tree_predict(f.tree(0), x));
}

TEST(Ensemble, IdenticalTreesEqualOne) {
  Rng rng(9);
  const auto t = random_tree(rng, 3, 4);
  Forest f({5, 3, 4});
  for (int k = 0; k < 5; ++k) {
    std::copy(t.weights.begin(), t.weights.end(), f.tree_weights(k).begin());
    std::copy(t.thresholds.begin(), t.thresholds.end(), f.tree_thresholds(k).begin());
    std::copy(t.leaves.begin(), t.leaves.end(), f.tree_leaves(k).begin());
  }
  const auto x = random_x(rng, 4);
  EXPECT_NEAR(forest_predict(f, x), tree_predict(t, x), 1e-14);
}

TEST(Ensemble, TreeOrderDoesNotMatter) {
  Rng rng(10);
  const ForestShape shape{4, 3, 5};
  const auto f = random_forest(rng, shape);
  Forest g(shape);
  const std::size_t block = shape.tree_block();
  for (int k = 0; k < 4; ++k) {
    const int src = 3 - k;
    std::copy_n(f.parameters().begin() + src * block, block, g.parameters().begin() + k * block);
  }
  for (int i = 0; i < 50; ++i) {
    const auto x = random_x(rng, 5);
    // Summation order differs, so equality holds to rounding only.
    EXPECT_NEAR(forest_predict(f, x), forest_predict(g, x), 1e-15);
  }
}

TEST(Ensemble, AppliesFeatureScaling) {
  Rng rng(11);
  auto f = random_forest(rng, {2, 2, 3});
  f.feature_mean() = {1.0, -2.0, 0.5};
  f.feature_std() = {2.0, 4.0, 0.25};
  const std::vector<double> raw{3.0, 2.0, 1.0};
  const std::vector<double> z{1.0, 1.0, 2.0};
  EXPECT_NEAR(forest_predict(f, raw), forest_predict_normalized(f, z), 1e-15);
  Predictor p(f);
  EXPECT_EQ(p(raw), forest_predict(f, raw));
}

TEST(Ensemble, WrongLengthThrows) {
  Forest f({2, 2, 3});
  const std::vector<double> x{1.0, 2.0};
  EXPECT_THROW(forest_predict(f, x), ArgumentError);
}

TEST(Loss, Examples) {
  for (auto k : {LossKind::kMse, LossKind::kMae, LossKind::kHuber}) EXPECT_EQ(loss(1.7, 1.7, k), 0.0);
  EXPECT_EQ(loss(2.0, 0.0, LossKind::kMse), 4.0);
  EXPECT_EQ(loss(3.0, 0.0, LossKind::kHuber, 1.0), 2.5);
  EXPECT_EQ(loss(0.5, 0.0, LossKind::kHuber, 1.0), 0.125);
  EXPECT_EQ(loss(-3.0, 0.0, LossKind::kMae), 3.0);
}

TEST(Loss, DerivativeMatchesDifference) {
  for (auto k : {LossKind::kMse, LossKind::kMae, LossKind::kHuber}) {
    for (double p : {-2.3, -0.4, 0.7, 1.9}) {
      const double h = 1e-6;
      const double fd = (loss(p + h, 0.1, k, 0.8) - loss(p - h, 0.1, k, 0.8)) / (2 * h);
      EXPECT_NEAR(loss_derivative(p, 0.1, k, 0.8), fd, 1e-6);
    }
  }
}

TEST(Loss, Names) {
  EXPECT_EQ(parse_loss_kind("huber"), LossKind::kHuber);
  EXPECT_EQ(to_string(LossKind::kMae), "mae");
  EXPECT_THROW(parse_loss_kind("l3"), ArgumentError);
  EXPECT_EQ(parse_loss_composition("per_tree"), LossComposition::kPerTree);
}

TEST(Backward, HandComputedLeafGradient) {
  Forest f({1, 1, 1});
  f.tree_leaves(0)[1] = 2.0;  // gate 0.5 everywhere: prediction 1
  const std::vector<double> x{0.7}, y{0.0};
  const DataView data{x, y, 1};
  const std::vector<std::size_t> rows{0};
  std::vector<double> grad(f.parameters().size());
  const double l = backward(f, data, rows, {}, grad);
  EXPECT_NEAR(l, 1.0, 1e-15);
  const auto block = f.shape();
  const std::size_t leaf0 = block.internal_nodes() * (block.n_features + 1);
  EXPECT_NEAR(grad[leaf0], 1.0, 1e-15);
  EXPECT_NEAR(grad[leaf0 + 1], 1.0, 1e-15);
}

TEST(Backward, ZeroResidualZeroGradient) {
  Rng rng(12);
  const ForestShape shape{3, 3, 4};
  const auto f = random_forest(rng, shape);
  std::vector<double> x, y;
  for (int r = 0; r < 20; ++r) {
    const auto row = random_x(rng, 4);
    x.insert(x.end(), row.begin(), row.end());
    y.push_back(forest_predict_normalized(f, row));
  }
  const DataView data{x, y, 4};
  std::vector<std::size_t> rows(20);
  std::iota(rows.begin(), rows.end(), 0);
  std::vector<double> grad(shape.parameter_count(), 1.0);
  EXPECT_NEAR(backward(f, data, rows, {}, grad), 0.0, 1e-28);
  for (double g : grad) EXPECT_NEAR(g, 0.0, 1e-14);
}

TEST(Backward, MatchesFiniteDifferences) {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const ForestShape shape{1 + static_cast<int>(uniform_index(rng, 4)), 1 + static_cast<int>(uniform_index(rng, 3)),
                            1 + static_cast<int>(uniform_index(rng, 8))};
    Objective obj;
    obj.kind = static_cast<LossKind>(trial % 3 == 1 ? 0 : trial % 3);
    obj.composition = trial % 2 ? LossComposition::kPerTree : LossComposition::kEnsemble;
    auto f = random_forest(rng, shape);
    std::vector<double> x, y;
    for (int r = 0; r < 6; ++r) {
      const auto row = random_x(rng, shape.n_features);
      x.insert(x.end(), row.begin(), row.end());
      y.push_back(uniform(rng, -3.0, 3.0));
    }
    const DataView data{x, y, shape.n_features};
    std::vector<std::size_t> rows(6);
    std::iota(rows.begin(), rows.end(), 0);
    std::vector<double> grad(shape.parameter_count());
    backward(f, data, rows, obj, grad);
    const double eps = 1e-5;
    for (std::size_t i = 0; i < grad.size(); ++i) {
      const double keep = f.parameters()[i];
      f.parameters()[i] = keep + eps;
      const double up = batch_loss(f, data, rows, obj);
      f.parameters()[i] = keep - eps;
      const double down = batch_loss(f, data, rows, obj);
      f.parameters()[i] = keep;
      const double fd = (up - down) / (2 * eps);
      EXPECT_LE(std::abs(grad[i] - fd), 1e-4 * std::max(std::abs(fd), std::abs(grad[i])) + 1e-8)
          << "trial " << trial << " param " << i;
    }
  }
}

TEST(Backward, EmptyBatchThrows) {
  Forest f({1, 1, 1});
  const std::vector<double> x{0.0}, y{0.0};
  std::vector<double> grad(f.parameters().size());
  EXPECT_THROW(backward(f, {x, y, 1}, {}, {}, grad), ArgumentError);
}

TEST(Optimizer, SgdStep) {
  Optimizer opt(OptimizerConfig::sgd(0.1), 1);
  std::vector<double> theta{1.0};
  const std::vector<double> g{2.0};
  opt.step(theta, g);
  EXPECT_NEAR(theta[0], 0.8, 1e-15);
}

TEST(Optimizer, ZeroRateLeavesParameters) {
  for (auto cfg : {OptimizerConfig::sgd(0.0), OptimizerConfig::adam(0.0), OptimizerConfig::qhadam(0.0)}) {
    Optimizer opt(cfg, 3);
    std::vector<double> theta{1.0, -2.0, 3.0};
    const auto before = theta;
    for (int i = 0; i < 5; ++i) opt.step(theta, std::vector<double>{0.5, -1.0, 7.0});
    EXPECT_EQ(theta, before);
  }
}

TEST(Optimizer, QhAdamAtUnitNuIsAdam) {
  auto q = OptimizerConfig::qhadam(1e-2);
  auto a = OptimizerConfig::adam(1e-2);
  q.nu1 = q.nu2 = 1.0;
  q.beta1 = a.beta1;
  q.beta2 = a.beta2;
  Optimizer oq(q, 2), oa(a, 2);
  std::vector<double> tq{0.3, -0.1}, ta = tq;
  for (int s = 0; s < 10; ++s) {
    const std::vector<double> g{std::sin(s + 1.0), 0.1 * s - 0.4};
    oq.step(tq, g);
    oa.step(ta, g);
    EXPECT_NEAR(tq[0], ta[0], 1e-12);
    EXPECT_NEAR(tq[1], ta[1], 1e-12);
  }
  EXPECT_EQ(oq.steps(), 10);
}

TEST(Optimizer, SizeMismatchThrows) {
  Optimizer opt(OptimizerConfig::adam(1e-3), 2);
  std::vector<double> theta{1.0};
  EXPECT_THROW(opt.step(theta, std::vector<double>{1.0}), ArgumentError);
  EXPECT_THROW(parse_optimizer_kind("lbfgs"), ArgumentError);
}

TEST(Train, ConstantTarget) {
  auto t = linear_table(400, 1);
  std::fill(t.y.begin(), t.y.end(), 2.5);
  TrainConfig cfg;
  cfg.epochs = 10;
  const auto r = train({4, 3, 2}, t.raw(), t.raw(), cfg);
  double worst = 0.0;
  for (std::size_t i = 0; i < t.y.size(); ++i)
    worst = std::max(worst, std::pow(forest_predict(r.forest, std::span(t.x).subspan(2 * i, 2)) - 2.5, 2));
  EXPECT_LE(worst, 1e-6);
}

TEST(Train, LinearTarget) {
  const auto tr = linear_table(10000, 2);
  const auto va = linear_table(2000, 3);
  TrainConfig cfg;
  cfg.optimizer = OptimizerConfig::qhadam(1e-2);
  cfg.epochs = 100;
  const auto r = train({16, 5, 2}, tr.raw(), va.raw(), cfg);
  EXPECT_LE(normalized_mse(r.forest, va.raw()), 1e-2);
  EXPECT_GT(r.best_epoch, 0);
}

TEST(Train, SeededRunsAreByteIdentical) {
  const auto tr = linear_table(500, 4);
  const auto va = linear_table(100, 5);
  TrainConfig cfg;
  cfg.epochs = 5;
  cfg.seed = 77;
  std::ostringstream a, b;
  write_model(a, train({4, 3, 2}, tr.raw(), va.raw(), cfg).forest);
  write_model(b, train({4, 3, 2}, tr.raw(), va.raw(), cfg).forest);
  EXPECT_EQ(a.str(), b.str());
  cfg.seed = 78;
  std::ostringstream c;
  write_model(c, train({4, 3, 2}, tr.raw(), va.raw(), cfg).forest);
  EXPECT_NE(a.str(), c.str());
}

TEST(Train, EmptySetsThrow) {
  const auto tr = linear_table(50, 6);
  const Table empty{{}, {}, 2};
  EXPECT_THROW(train({2, 2, 2}, empty.raw(), tr.raw(), {}), ArgumentError);
  EXPECT_THROW(train({2, 2, 2}, tr.raw(), empty.raw(), {}), ArgumentError);
}

TEST(Train, ColumnStats) {
  const std::vector<double> x{1.0, 5.0, 3.0, 5.0};
  const std::vector<double> y{0.0, 0.0};
  std::vector<double> mean, sd;
  column_stats({x, y, 2}, mean, sd);
  EXPECT_EQ(mean, (std::vector<double>{2.0, 5.0}));
  EXPECT_NEAR(sd[0], 1.0, 1e-15);
  EXPECT_EQ(sd[1], 1.0);
}

TEST(ModelIo, RoundTrip) {
  Rng rng(14);
  auto f = random_forest(rng, {3, 2, 4});
  f.feature_mean() = {0.1, 0.2, 0.3, 0.4};
  f.feature_std() = {1.5, 2.5, 3.5, 4.5};
  f.set_loss_kind(LossKind::kHuber);
  std::stringstream s;
  write_model(s, f);
  EXPECT_EQ(s.str().substr(0, 8), "DDFABC01");
  EXPECT_EQ(s.str().size(), 8 + 16 + 4 * 16 + 3 * f.shape().tree_block() * 8);
  const auto g = read_model(s);
  EXPECT_EQ(f, g);
}

TEST(ModelIo, RejectsBadInput) {
  std::stringstream bad("DDFABC99" + std::string(64, '\0'));
  EXPECT_THROW(read_model(bad), FormatError);
  Forest f({2, 2, 3});
  std::stringstream s;
  write_model(s, f);
  std::stringstream cut(s.str().substr(0, s.str().size() - 5));
  EXPECT_THROW(read_model(cut), FormatError);
  EXPECT_THROW(load_model("/nonexistent/model.bin"), ConfigError);
}
