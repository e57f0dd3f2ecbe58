#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ddfabc/errors.hpp"
#include "ddfabc/fdtd/grid.hpp"
#include "ddfabc/fdtd/pec.hpp"
#include "ddfabc/fdtd/source.hpp"

namespace ddfabc::fdtd {

/// Grid truncation plugged into the leapfrog loop. Per step the loop calls
/// step_h, after_h, step_e, apply, then injects the source.
class BoundaryHandler {
 public:
  virtual ~BoundaryHandler() = default;

  /// Called once before the first step; clears any per-run state.
  virtual void reset(const FieldGrid& grid, const GridSpec& spec) = 0;

  /// Correction to the H half-step, before E is advanced. Default: none.
  virtual void after_h(FieldGrid& grid, std::int64_t step);

  /// Owns the outer-ring tangential E and any E correction.
  virtual void apply(FieldGrid& grid, std::int64_t step) = 0;

  virtual std::string name() const = 0;
};

/// Outer-ring tangential E held at zero.
class PecBoundary final : public BoundaryHandler {
 public:
  void reset(const FieldGrid& grid, const GridSpec& spec) override;
  void apply(FieldGrid& grid, std::int64_t step) override;
  std::string name() const override { return "pec"; }
};

/// Ey time series at a set of edges. Entry n holds Ey at t = (n + 1) dt,
/// i.e. after the n-th full step.
struct ProbeRecord {
  std::vector<EdgeIndex> probes;
  std::vector<std::vector<double>> ey;
  double dt = 0.0;

  std::int64_t steps() const { return ey.empty() ? 0 : static_cast<std::int64_t>(ey.front().size()); }
};

/// Thrown by run() when the fields blow up; carries what was recorded.
class RunAborted : public InstabilityError {
 public:
  RunAborted(const InstabilityError& cause, ProbeRecord partial)
      : InstabilityError(cause), partial_(std::move(partial)) {}
  const ProbeRecord& partial() const { return partial_; }

 private:
  ProbeRecord partial_;
};

/// One simulation instance: fields, geometry and the boundary in use.
class Simulation {
 public:
  Simulation(GridSpec spec, SourceSpec source, PecMask pec, BoundaryHandler& boundary);

  /// Advances one full step (H, E, boundary, source).
  void step();

  std::int64_t step_index() const { return step_; }
  double time() const { return static_cast<double>(step_) * spec_.dt; }

  FieldGrid& fields() { return grid_; }
  const FieldGrid& fields() const { return grid_; }
  const GridSpec& spec() const { return spec_; }
  const SourceSpec& source() const { return source_; }
  const PecMask& pec() const { return pec_; }

  void set_source_enabled(bool enabled) { source_enabled_ = enabled; }

 private:
  GridSpec spec_;
  SourceSpec source_;
  PecMask pec_;
  BoundaryHandler* boundary_;
  FieldGrid grid_;
  std::int64_t step_ = 0;
  bool source_enabled_ = true;
};

/// Runs spec.n_steps steps from zero fields and records Ey at `probes`.
/// Throws RunAborted on instability.
ProbeRecord run(const GridSpec& spec, const SourceSpec& source, const PecMask& pec,
                BoundaryHandler& boundary, std::span<const EdgeIndex> probes);

/// Discrete electromagnetic energy, J per metre of z, with Hz advanced half
/// a step to the time level of E.
double em_energy(const FieldGrid& grid, const GridSpec& spec);

/// CSV with header `step,t_seconds,ey`, one row per step, %.16e.
void write_probe_csv(std::ostream& out, const ProbeRecord& record, std::size_t probe = 0);

}  // namespace ddfabc::fdtd
