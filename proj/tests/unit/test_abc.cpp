#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <vector>

#include "ddfabc/abc/ddf_boundary.hpp"
#include "ddfabc/abc/model.hpp"
#include "ddfabc/dataset/extract.hpp"
#include "ddfabc/errors.hpp"
#include "ddfabc/harness/schemes.hpp"
#include "ddfabc/rng.hpp"

using namespace ddfabc;
using namespace ddfabc::abc;

namespace {

forest::Forest random_forest(int m, std::uint64_t seed) {
  forest::Forest f({3, 2, m});
  Rng rng(seed);
  for (auto& v : f.parameters()) v = uniform(rng, -1.0, 1.0);
  return f;
}

forest::Forest constant_forest(int m, double c) {
  forest::Forest f({2, 1, m});
  for (int k = 0; k < 2; ++k)
    for (auto& q : f.tree_leaves(k)) q = c;
  return f;
}

// Fails the test when it sees a non-finite feature; predicts 0.
class FiniteOnlyModel final : public RingModel {
 public:
  explicit FiniteOnlyModel(int m) : m_(m) {}
  int n_features() const override { return m_; }
  double predict(std::size_t, const dataset::RingEdge& e, std::int64_t, std::span<const double> x) override {
    for (double v : x) {
      if (!std::isfinite(v)) {
        ADD_FAILURE() << "non-finite feature at " << to_string(e.side) << " " << e.index;
        break;
      }
    }
    ++calls;
    return 0.0;
  }
  int calls = 0;

 private:
  int m_;
};

class ConstantModel final : public RingModel {
 public:
  ConstantModel(int m, double v) : m_(m), v_(v) {}
  int n_features() const override { return m_; }
  double predict(std::size_t, const dataset::RingEdge&, std::int64_t, std::span<const double>) override {
    return v_;
  }

 private:
  int m_;
  double v_;
};

fdtd::GridSpec small_spec(int nx, int ny) {
  fdtd::GridSpec g;
  g.nx = nx;
  g.ny = ny;
  g.dt = 0.5 * fdtd::courant_limit(g.dx, g.dy);
  return g;
}

}  // namespace

TEST(Guard, Examples) {
  std::int64_t n = 0;
  EXPECT_EQ(stability_guard(0.5, 1.0, n), 0.5);
  EXPECT_EQ(n, 0);
  EXPECT_EQ(stability_guard(2.0, 1.0, n), 1.0);
  EXPECT_EQ(n, 1);
  EXPECT_EQ(stability_guard(-3.0, 1.0, n), -1.0);
  EXPECT_EQ(n, 2);
  EXPECT_EQ(stability_guard(-1.0, 1.0, n), -1.0);
  EXPECT_EQ(n, 2);
}

TEST(Guard, DefaultClamp) {
  EXPECT_EQ(default_clamp(0.3), 3.0);
  EXPECT_EQ(default_clamp(0.3, 2.0), 0.6);
  EXPECT_EQ(default_clamp(0.0), 1.0);
  EXPECT_EQ(default_clamp(std::numeric_limits<double>::infinity()), 1.0);
}

TEST(Ddf, WidthMismatchIsConfigError) {
  ConstantModel m(53, 0.0);
  EXPECT_THROW(DdfBoundary(m, dataset::StencilSpec{}, std::nullopt), ConfigError);
  ConstantModel ok(54, 0.0);
  EXPECT_THROW(DdfBoundary(ok, dataset::StencilSpec{}, 0.0), ConfigError);
}

TEST(Ddf, ZeroIsAFixedPoint) {
  const dataset::StencilSpec st;
  const auto f = random_forest(st.feature_count(), 1);
  ForestRingModel model(f, f, st, {true, false});
  DdfBoundary ddf(model, st, std::nullopt);
  auto spec = small_spec(40, 12);
  fdtd::SourceSpec src;
  src.position = {20, 6};
  src.amplitude = 0.0;
  fdtd::Simulation sim(spec, src, fdtd::PecMask(40, 12), ddf);
  for (int n = 0; n < 1000; ++n) sim.step();
  EXPECT_EQ(fdtd::em_energy(sim.fields(), spec), 0.0);
  EXPECT_EQ(ddf.max_abs_prediction(), 0.0);
}

TEST(Ddf, ReadsOnlyTheBand) {
  const dataset::StencilSpec st;
  FiniteOnlyModel model(st.feature_count());
  DdfBoundary ddf(model, st, std::nullopt);
  const int nx = 30, ny = 20;
  fdtd::FieldGrid g(nx, ny);
  ddf.reset(g, small_spec(nx, ny));
  const double nan = std::nan("");
  const auto deep = [&](int i, int j, int ni, int nj) {
    return i >= 4 && j >= 4 && i <= ni - 5 && j <= nj - 5;
  };
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j <= ny; ++j) g.ex(i, j) = deep(i, j, nx, ny + 1) ? nan : 1.0;
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j < ny; ++j) g.ey(i, j) = deep(i, j, nx + 1, ny) ? nan : 1.0;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) g.hz(i, j) = deep(i, j, nx, ny) ? nan : 1.0;
  ddf.apply(g, 0);
  ddf.apply(g, 1);
  EXPECT_EQ(model.calls, 2 * static_cast<int>(ddf.ring().size()));
}

TEST(Ddf, GuardCountsAndHolds) {
  const dataset::StencilSpec st;
  ConstantModel model(st.feature_count(), 5.0);
  DdfBoundary ddf(model, st, 2.0);
  const int nx = 20, ny = 10;
  fdtd::FieldGrid g(nx, ny);
  ddf.reset(g, small_spec(nx, ny));
  ddf.apply(g, 0);
  EXPECT_EQ(ddf.clamp_count(), static_cast<std::int64_t>(ddf.ring().size()));
  EXPECT_EQ(ddf.max_abs_prediction(), 5.0);
  EXPECT_EQ(g.ey(0, 3), 2.0);
  EXPECT_EQ(g.ex(4, ny), 2.0);
}

TEST(Ddf, NonFinitePredictionThrows) {
  const dataset::StencilSpec st;
  ConstantModel model(st.feature_count(), std::nan(""));
  DdfBoundary ddf(model, st, 1.0);
  fdtd::FieldGrid g(20, 10);
  ddf.reset(g, small_spec(20, 10));
  EXPECT_THROW(ddf.apply(g, 7), InstabilityError);
}

TEST(Ddf, ForestModelDecodesTarget) {
  const dataset::StencilSpec st;
  const int m = st.feature_count();
  const auto f = constant_forest(m, 0.5);
  std::vector<double> x(m, 0.0);
  x[st.self_index()] = -3.0;
  x[7] = 2.0;
  const dataset::RingEdge e{dataset::Side::kLeft, 3, false};
  ForestRingModel plain(f, f, st);
  EXPECT_DOUBLE_EQ(plain.predict(0, e, 0, x), 0.5);
  ForestRingModel inc(f, f, st, {false, true});
  EXPECT_DOUBLE_EQ(inc.predict(0, e, 0, x), -2.5);
  ForestRingModel both(f, f, st, {true, true});
  EXPECT_DOUBLE_EQ(both.predict(0, e, 0, x), 3.0 * 0.5 - 3.0);
}

TEST(Ddf, ReplayReproducesTeacher) {
  Scene scene;
  scene.n_steps = 600;
  const dataset::StencilSpec st;
  const auto teacher = dataset::run_teacher(scene, {}, st);
  ReplayRingModel replay(teacher.ring_values, st.feature_count());
  DdfBoundary ddf(replay, st, std::nullopt);
  const auto l = layout(scene, 1);
  const std::vector<fdtd::EdgeIndex> probes{l.probe};
  const auto rec = fdtd::run(l.grid, l.source, l.pec_mask(), ddf, probes);
  ASSERT_EQ(rec.steps(), teacher.probe.steps());
  double peak = 0.0;
  for (std::int64_t n = 0; n < rec.steps(); ++n) {
    EXPECT_NEAR(rec.ey[0][n], teacher.probe.ey[0][n], 1e-10) << "step " << n;
    peak = std::max(peak, std::abs(rec.ey[0][n]));
  }
  EXPECT_GT(peak, 0.0);
}

TEST(Schemes, CellCounts) {
  Scene scene;
  scene.n_steps = 5;
  DdfModel model{constant_forest(54, 0.0), constant_forest(54, 0.0), {}, 1.0, std::nullopt, {}, {}};
  EXPECT_EQ(harness::run_pec(scene).cells, 108 * 8);
  EXPECT_EQ(harness::run_ddf(scene, model).cells, 108 * 8);
  EXPECT_EQ(harness::run_cpml(scene, {}).cells, 126 * 26);
  const auto a = harness::run_pec(scene).probe_in_region;
  const auto b = harness::run_cpml(scene, {}).probe_in_region;
  EXPECT_EQ(a.i, b.i);
  EXPECT_EQ(a.j, b.j);
}

TEST(Model, SaveLoadRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "ddfabc_test_model";
  std::filesystem::create_directories(dir);
  const auto path = dir / "m.bin";
  dataset::StencilSpec st;
  st.components = {dataset::Component::kEy, dataset::Component::kHz};
  DdfModel m{random_forest(st.feature_count(), 2), random_forest(st.feature_count(), 3), st, 0.25, 2.5,
             {true, true}, {{"train.note", "x"}}};
  save_ddf_model(path, m);
  EXPECT_TRUE(std::filesystem::exists(corner_path(path)));
  EXPECT_TRUE(std::filesystem::exists(meta_path(path)));
  const auto back = load_ddf_model(path);
  EXPECT_EQ(back.edge, m.edge);
  EXPECT_EQ(back.corner, m.corner);
  EXPECT_EQ(back.stencil, st);
  EXPECT_EQ(back.max_abs_field, 0.25);
  EXPECT_EQ(back.clamp, 2.5);
  EXPECT_TRUE(back.encoding.amplitude_scaling && back.encoding.increment);
  EXPECT_EQ(back.metadata.at("train.note"), "x");

  m.clamp.reset();
  m.stencil = {};  // 54 features, forests have 36
  save_ddf_model(path, m);
  EXPECT_THROW(load_ddf_model(path), ConfigError);
  std::filesystem::remove_all(dir);
}
