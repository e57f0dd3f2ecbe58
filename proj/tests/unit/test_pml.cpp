#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "ddfabc/constants.hpp"
#include "ddfabc/errors.hpp"
#include "ddfabc/fdtd/simulation.hpp"
#include "ddfabc/pml/cpml.hpp"

using namespace ddfabc;
using namespace ddfabc::pml;

namespace {

constexpr double kCell = 1e-3;

// Parallel-plate strip driven by a full column of soft sources: the fields are
// uniform across the strip, so the wave is a clean normal-incidence plane wave.
std::vector<double> strip_run(int nx, int ny, int src, int probe, int steps, fdtd::BoundaryHandler& b) {
  fdtd::GridSpec g;
  g.nx = nx;
  g.ny = ny;
  g.dt = 0.5 * fdtd::courant_limit(kCell, kCell);
  g.n_steps = steps;
  fdtd::SourceSpec s;
  s.position = {src, ny / 2};
  fdtd::SourceSpec quiet = s;
  quiet.amplitude = 0.0;
  fdtd::Simulation sim(g, quiet, fdtd::PecMask(nx, ny), b);
  std::vector<double> out;
  for (int n = 0; n < steps; ++n) {
    sim.step();
    const double j = fdtd::pulse(s, (n + 0.5) * g.dt);
    for (int y = 0; y < ny; ++y) sim.fields().ey(src, y) -= g.dt / phys::kEps0 * j / kCell;
    out.push_back(sim.fields().ey(probe, ny / 2));
  }
  return out;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST(Profile, SigmaMaxDefault) {
  EXPECT_NEAR(sigma_max(PmlParams{}, kCell), 10.6177, 1e-4);
  // Same value as the classic (m + 1) / (150 pi dx) optimum.
  EXPECT_NEAR(sigma_max(PmlParams{}, kCell), 5.0 / (150.0 * M_PI * kCell), 0.01);
}

TEST(Profile, Endpoints) {
  PmlParams p;
  p.kappa_max = 5.0;
  p.alpha = 0.05;
  const auto in = grade_profile(p, 0.0, kCell);
  EXPECT_EQ(in.sigma, 0.0);
  EXPECT_EQ(in.kappa, 1.0);
  const auto out = grade_profile(p, 1.0, kCell);
  EXPECT_DOUBLE_EQ(out.sigma, sigma_max(p, kCell));
  EXPECT_DOUBLE_EQ(out.kappa, 5.0);
  EXPECT_EQ(out.alpha, 0.05);
}

TEST(Profile, RejectsOutsideUnitInterval) {
  EXPECT_THROW(grade_profile(PmlParams{}, -0.01, kCell), ArgumentError);
  EXPECT_THROW(grade_profile(PmlParams{}, 1.01, kCell), ArgumentError);
  EXPECT_THROW(grade_profile(PmlParams{}, std::nan(""), kCell), ArgumentError);
}

TEST(Profile, MonotoneGrading) {
  PmlParams p;
  p.kappa_max = 3.0;
  double last_s = -1.0, last_k = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const auto g = grade_profile(p, i / 100.0, kCell);
    EXPECT_GT(g.sigma, last_s);
    EXPECT_GE(g.kappa, last_k);
    last_s = g.sigma;
    last_k = g.kappa;
  }
}

TEST(Params, Validate) {
  PmlParams p;
  EXPECT_NO_THROW(p.validate());
  p.thickness = 0;
  EXPECT_THROW(p.validate(), ArgumentError);
  p = {};
  p.kappa_max = 0.5;
  EXPECT_THROW(p.validate(), ArgumentError);
  p = {};
  p.sigma_max_ratio = 0.0;
  EXPECT_THROW(p.validate(), ArgumentError);
  p = {};
  p.alpha = -1.0;
  EXPECT_THROW(p.validate(), ArgumentError);
}

TEST(Coefficients, VacuumIsIdentity) {
  const auto k = convolution_coeffs(GradedValues{}, 1e-12);
  EXPECT_EQ(k.b, 1.0);
  EXPECT_EQ(k.c, 0.0);
  EXPECT_EQ(k.inv_kappa, 1.0);
}

TEST(Coefficients, ClosedForm) {
  const double dt = 1.179327e-12;
  const GradedValues g{5000.0, 2.0, 0.01};
  const auto k = convolution_coeffs(g, dt);
  const double b = std::exp(-(5000.0 / 2.0 + 0.01) * dt / phys::kEps0);
  EXPECT_DOUBLE_EQ(k.b, b);
  EXPECT_DOUBLE_EQ(k.c, 5000.0 / (5000.0 * 2.0 + 4.0 * 0.01) * (b - 1.0));
  EXPECT_DOUBLE_EQ(k.inv_kappa, 0.5);
  EXPECT_GT(k.b, 0.0);
  EXPECT_LT(k.b, 1.0);
  EXPECT_LT(k.c, 0.0);
}

TEST(Cpml, LayerTooThickThrows) {
  fdtd::GridSpec g;
  g.nx = 20;
  g.ny = 40;
  g.dt = 0.5 * fdtd::courant_limit(kCell, kCell);
  CpmlBoundary b(PmlParams{});
  fdtd::FieldGrid f(20, 40);
  EXPECT_THROW(b.reset(f, g), ArgumentError);
}

TEST(Cpml, VanishingConductivityMatchesPec) {
  PmlParams p;
  p.sigma_max_ratio = 1e-30;
  CpmlBoundary cpml(p);
  fdtd::PecBoundary pec;
  const auto a = strip_run(60, 30, 30, 20, 400, cpml);
  const auto b = strip_run(60, 30, 30, 20, 400, pec);
  const double peak = max_abs(b);
  for (std::size_t n = 0; n < a.size(); ++n) EXPECT_NEAR(a[n], b[n], 1e-12 * peak) << "step " << n;
}

TEST(Cpml, NormalIncidenceReflectionSmall) {
  // Reference strip long enough that its walls stay out of the window.
  const int steps = 1200;
  CpmlBoundary cpml(PmlParams{});
  fdtd::PecBoundary pec;
  const auto t = strip_run(120, 30, 60, 15, steps, cpml);
  const auto r = strip_run(2000, 30, 1000, 955, steps, pec);
  double err = 0.0;
  for (int n = 0; n < steps; ++n) err = std::max(err, std::abs(t[n] - r[n]));
  EXPECT_LT(err / max_abs(r), 1e-4);
  EXPECT_GT(max_abs(r), 0.0);
}

TEST(Cpml, FieldsDecayAfterPulse) {
  fdtd::GridSpec g;
  g.nx = 60;
  g.ny = 60;
  g.dt = 0.5 * fdtd::courant_limit(kCell, kCell);
  g.n_steps = 3000;
  fdtd::SourceSpec s;
  s.position = {30, 30};
  CpmlBoundary cpml(PmlParams{});
  fdtd::Simulation sim(g, s, fdtd::PecMask(60, 60), cpml);
  double peak = 0.0;
  for (int n = 0; n < 400; ++n) {
    sim.step();
    peak = std::max(peak, fdtd::em_energy(sim.fields(), g));
  }
  for (int n = 400; n < 3000; ++n) sim.step();
  EXPECT_LT(fdtd::em_energy(sim.fields(), g), 1e-6 * peak);
  EXPECT_TRUE(std::isfinite(cpml.max_abs_psi()));
}
