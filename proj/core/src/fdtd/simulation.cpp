#include "ddfabc/fdtd/simulation.hpp"

#include <cstdio>
#include <ostream>

#include "ddfabc/constants.hpp"
#include "ddfabc/fdtd/updates.hpp"

namespace ddfabc::fdtd {

void BoundaryHandler::after_h(FieldGrid&, std::int64_t) {}

void PecBoundary::reset(const FieldGrid&, const GridSpec&) {}

void PecBoundary::apply(FieldGrid& grid, std::int64_t) {
  const int nx = grid.nx();
  const int ny = grid.ny();
  for (int j = 0; j < ny; ++j) {
    grid.ey(0, j) = 0.0;
    grid.ey(nx, j) = 0.0;
  }
  for (int i = 0; i < nx; ++i) {
    grid.ex(i, 0) = 0.0;
    grid.ex(i, ny) = 0.0;
  }
}

Simulation::Simulation(GridSpec spec, SourceSpec source, PecMask pec, BoundaryHandler& boundary)
    : spec_(spec), source_(source), pec_(std::move(pec)), boundary_(&boundary), grid_(spec.nx, spec.ny) {
  spec_.validate();
  source_.validate();
  const auto& p = source_.position;
  if (p.i <= 0 || p.i >= spec_.nx || p.j < 0 || p.j >= spec_.ny) {
    throw ArgumentError("source must sit on an interior Ey edge");
  }
  if (pec_.nx() != spec_.nx || pec_.ny() != spec_.ny) throw ArgumentError("pec mask does not match grid");
  boundary_->reset(grid_, spec_);
}

void Simulation::step() {
  step_h(grid_, spec_, step_);
  boundary_->after_h(grid_, step_);
  step_e(grid_, spec_, pec_, step_);
  boundary_->apply(grid_, step_);
  if (source_enabled_) {
    // E advances from t_n to t_{n+1}; the current is sampled at the midpoint.
    inject_source(grid_, source_, (static_cast<double>(step_) + 0.5) * spec_.dt, spec_);
  }
  ++step_;
}

ProbeRecord run(const GridSpec& spec, const SourceSpec& source, const PecMask& pec,
                BoundaryHandler& boundary, std::span<const EdgeIndex> probes) {
  ProbeRecord rec;
  rec.probes.assign(probes.begin(), probes.end());
  rec.dt = spec.dt;
  rec.ey.resize(probes.size());
  for (const auto& p : probes) {
    if (p.i < 0 || p.i > spec.nx || p.j < 0 || p.j >= spec.ny) throw ArgumentError("probe outside grid");
  }
  Simulation sim(spec, source, pec, boundary);
  for (auto& s : rec.ey) s.reserve(static_cast<std::size_t>(spec.n_steps));
  try {
    for (std::int64_t n = 0; n < spec.n_steps; ++n) {
      sim.step();
      for (std::size_t k = 0; k < probes.size(); ++k) {
        rec.ey[k].push_back(sim.fields().ey(probes[k].i, probes[k].j));
      }
    }
  } catch (const InstabilityError& e) {
    throw RunAborted(e, std::move(rec));
  }
  return rec;
}

double em_energy(const FieldGrid& grid, const GridSpec& spec) {
  double e2 = 0.0;
  for (double v : grid.ex.data()) e2 += v * v;
  for (double v : grid.ey.data()) e2 += v * v;
  // Hz lags E by half a step; advance it by dt/2 so both share one time.
  const double k = 0.5 * spec.dt / phys::kMu0;
  double h2 = 0.0;
  for (int i = 0; i < grid.hz.ni(); ++i) {
    for (int j = 0; j < grid.hz.nj(); ++j) {
      const double curl = (grid.ey(i + 1, j) - grid.ey(i, j)) / spec.dx - (grid.ex(i, j + 1) - grid.ex(i, j)) / spec.dy;
      const double h = grid.hz(i, j) - k * curl;
      h2 += h * h;
    }
  }
  return 0.5 * spec.dx * spec.dy * (phys::kEps0 * e2 + phys::kMu0 * h2);
}

void write_probe_csv(std::ostream& out, const ProbeRecord& record, std::size_t probe) {
  out << "step,t_seconds,ey\n";
  if (record.ey.empty()) return;
  const auto& series = record.ey.at(probe);
  char buf[96];
  for (std::size_t n = 0; n < series.size(); ++n) {
    const auto step = static_cast<long long>(n + 1);
    std::snprintf(buf, sizeof buf, "%lld,%.16e,%.16e\n", step, static_cast<double>(step) * record.dt, series[n]);
    out << buf;
  }
}

}  // namespace ddfabc::fdtd
