#include "ddfabc/dataset/extract.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <string>

#include "ddfabc/errors.hpp"
#include "ddfabc/rng.hpp"

namespace ddfabc::dataset {

namespace {

void copy_inner(const fdtd::FieldGrid& outer, int off, fdtd::FieldGrid& inner) {
  for (int i = 0; i < inner.ex.ni(); ++i) {
    for (int j = 0; j < inner.ex.nj(); ++j) inner.ex(i, j) = outer.ex(i + off, j + off);
  }
  for (int i = 0; i < inner.ey.ni(); ++i) {
    for (int j = 0; j < inner.ey.nj(); ++j) inner.ey(i, j) = outer.ey(i + off, j + off);
  }
  for (int i = 0; i < inner.hz.ni(); ++i) {
    for (int j = 0; j < inner.hz.nj(); ++j) inner.hz(i, j) = outer.hz(i + off, j + off);
  }
}

void copy_ring(const fdtd::FieldGrid& src, fdtd::FieldGrid& dst) {
  const int nx = src.nx();
  const int ny = src.ny();
  for (int j = 0; j < ny; ++j) {
    dst.ey(0, j) = src.ey(0, j);
    dst.ey(nx, j) = src.ey(nx, j);
  }
  for (int i = 0; i < nx; ++i) {
    dst.ex(i, 0) = src.ex(i, 0);
    dst.ex(i, ny) = src.ex(i, ny);
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

TeacherRecorder::TeacherRecorder(pml::PmlParams params, TeacherObserver observer)
    : pml_(params), observer_(std::move(observer)), offset_(params.thickness) {}

void TeacherRecorder::reset(const fdtd::FieldGrid& grid, const fdtd::GridSpec& spec) {
  pml_.reset(grid, spec);
  const int nx = grid.nx() - 2 * offset_;
  const int ny = grid.ny() - 2 * offset_;
  if (nx < 1 || ny < 1) throw ArgumentError("teacher: grid smaller than its PML");
  snapshot_ = fdtd::FieldGrid(nx, ny);
  updated_ = fdtd::FieldGrid(nx, ny);
}

void TeacherRecorder::after_h(fdtd::FieldGrid& grid, std::int64_t step) { pml_.after_h(grid, step); }

void TeacherRecorder::apply(fdtd::FieldGrid& grid, std::int64_t step) {
  pml_.apply(grid, step);
  // updated_ still holds the previous step, whose ring is the current
  // pre-update ring value.
  copy_inner(grid, offset_, snapshot_);
  copy_ring(updated_, snapshot_);
  copy_inner(grid, offset_, updated_);
  if (observer_) observer_(step, snapshot_, updated_);
}

TeacherRun run_teacher(const Scene& scene, const pml::PmlParams& params, const StencilSpec& stencil,
                       const TeacherObserver& observer) {
  scene.validate();
  const Scene inner = scene.grown(1);
  const Layout l = layout(inner, params.thickness);
  TeacherRun out;
  out.ring = ring_edges(l.grid.nx - 2 * params.thickness, l.grid.ny - 2 * params.thickness, stencil);
  out.ring_values.reserve(static_cast<std::size_t>(l.grid.n_steps));
  TeacherRecorder rec(params, [&](std::int64_t step, const fdtd::FieldGrid& snap, const fdtd::FieldGrid& next) {
    std::vector<double> values;
    values.reserve(out.ring.size());
    for (const auto& e : out.ring) values.push_back(ring_value(next, e));
    out.ring_values.push_back(std::move(values));
    if (observer) observer(step, snap, next);
  });
  const fdtd::EdgeIndex probes[] = {l.probe};
  out.probe = fdtd::run(l.grid, l.source, l.pec_mask(), rec, probes);
  return out;
}

ExtractedSamples extract_samples(const TeacherConfig& config) {
  config.stencil.validate();
  config.pml.validate();
  if (config.scenarios.empty()) throw ArgumentError("extract: no scenarios");
  if (config.step_stride < 1) throw ArgumentError("extract: step_stride must be >= 1");
  const int m = config.stencil.feature_count();

  ExtractedSamples out;
  out.edge.n_features = m;
  out.corner.n_features = m;
  std::vector<double> row(static_cast<std::size_t>(m));

  for (const Scene& scene : config.scenarios) {
    fdtd::FieldGrid previous;
    std::vector<RingEdge> ring;
    run_teacher(scene, config.pml, config.stencil,
                [&](std::int64_t step, const fdtd::FieldGrid& snap, const fdtd::FieldGrid& next) {
                  if (ring.empty()) {
                    ring = ring_edges(snap.nx(), snap.ny(), config.stencil);
                    previous = fdtd::FieldGrid(snap.nx(), snap.ny());
                  }
                  if (step >= 1 && step % config.step_stride == 0) {
                    for (const auto& e : ring) {
                      assemble_features(snap, previous, e, config.stencil, row);
                      const double target = target_sign(e.side) * ring_value(next, e);
                      if (config.drop_silent_rows && target == 0.0 &&
                          std::all_of(row.begin(), row.end(), [](double v) { return v == 0.0; })) {
                        continue;
                      }
                      (e.corner ? out.corner : out.edge).append(row, target);
                    }
                  }
                  previous = snap;
                });
  }
  if (out.edge.rows() == 0) throw ArgumentError("extract: no edge rows produced");

  std::map<std::string, std::string> meta;
  const Scene& base = config.scenarios.front();
  const Layout inner = layout(base.grown(1), 0);
  meta["teacher.scheme"] = "cpml";
  meta["teacher.pml.thickness"] = std::to_string(config.pml.thickness);
  meta["teacher.pml.order"] = fmt(config.pml.order);
  meta["teacher.pml.sigma_max_ratio"] = fmt(config.pml.sigma_max_ratio);
  meta["teacher.pml.kappa_max"] = fmt(config.pml.kappa_max);
  meta["teacher.pml.alpha"] = fmt(config.pml.alpha);
  meta["grid.dx"] = fmt(base.dx);
  meta["grid.dy"] = fmt(base.dy);
  meta["grid.dt"] = fmt(base.time_step());
  meta["grid.n_steps"] = std::to_string(base.n_steps);
  meta["domain.nx"] = std::to_string(inner.grid.nx);
  meta["domain.ny"] = std::to_string(inner.grid.ny);
  meta["stencil.inward_depth"] = std::to_string(config.stencil.inward_depth);
  meta["stencil.tangential_halfwidth"] = std::to_string(config.stencil.tangential_halfwidth);
  meta["stencil.components"] = config.stencil.components_string();
  meta["stencil.time_levels"] = std::to_string(config.stencil.time_levels);
  meta["stencil.m"] = std::to_string(m);
  meta["canonicalized"] = "1";
  meta["feature_steps"] = "n-1,n";
  meta["target_step"] = "n+1";
  meta["seed"] = std::to_string(config.seed);
  meta["step_stride"] = std::to_string(config.step_stride);
  meta["scenarios"] = std::to_string(config.scenarios.size());
  for (std::size_t s = 0; s < config.scenarios.size(); ++s) {
    const Scene& sc = config.scenarios[s];
    const auto l = layout(sc, 0);
    meta["scenario." + std::to_string(s)] = "source=" + std::to_string(l.source.position.i) + ":" +
                                            std::to_string(l.source.position.j) + " t_w=" + fmt(sc.t_w) +
                                            " t0=" + fmt(sc.t0) + " amplitude=" + fmt(sc.amplitude);
  }
  for (auto* set : {&out.edge, &out.corner}) {
    set->metadata = meta;
    set->metadata["kind"] = set == &out.edge ? "edge" : "corner";
    const double peak = set->max_abs_value();
    set->metadata["max_abs_field"] = fmt(peak);
    set->metadata["degenerate"] = peak == 0.0 ? "1" : "0";
  }
  return out;
}

std::vector<Scene> scenario_sweep(const Scene& base, int n_scenarios, std::uint64_t seed, bool jitter) {
  if (n_scenarios < 1) throw ArgumentError("scenario_sweep: need at least one scenario");
  base.validate();
  std::vector<Scene> out{base};
  Rng rng(seed);
  const int sheet_centre = base.gap + base.sheet_width / 2;
  const int sheet_top = base.gap + base.sheet_thickness;
  for (int s = 1; s < n_scenarios; ++s) {
    Scene sc = base;
    if (jitter) {
      for (;;) {
        // Ey edges strictly inside the region, never on a thick sheet.
        const int i = 1 + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(base.region_nx() - 1)));
        const int j = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(base.region_ny())));
        sc.source_offset_x = i - sheet_centre;
        sc.source_offset_y = j - sheet_top;
        try {
          sc.validate();
          break;
        } catch (const ArgumentError&) {
        }
      }
      const double tw_scale = uniform(rng, 0.5, 2.0);
      sc.t_w = base.t_w * tw_scale;
      sc.t0 = base.t0 * tw_scale;
      sc.amplitude = base.amplitude * uniform(rng, 0.5, 2.0);
    }
    out.push_back(sc);
  }
  return out;
}

}  // namespace ddfabc::dataset
