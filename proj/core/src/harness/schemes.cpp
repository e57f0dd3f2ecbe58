#include "ddfabc/harness/schemes.hpp"

#include "ddfabc/abc/ddf_boundary.hpp"

namespace ddfabc::harness {

namespace {

SchemeRun run_with(const std::string& name, const Layout& l, fdtd::BoundaryHandler& boundary) {
  SchemeRun out;
  out.scheme = name;
  const fdtd::EdgeIndex probes[] = {l.probe};
  out.probe = fdtd::run(l.grid, l.source, l.pec_mask(), boundary, probes);
  out.probe_in_region = {l.probe.i - l.pad_x, l.probe.j - l.pad_y};
  out.cells = l.grid.cell_count();
  return out;
}

}  // namespace

SchemeRun run_pec(const Scene& scene) {
  scene.validate();
  fdtd::PecBoundary pec;
  return run_with("pec", layout(scene, 1), pec);
}

SchemeRun run_cpml(const Scene& scene, const pml::PmlParams& params) {
  scene.validate();
  params.validate();
  pml::CpmlBoundary cpml(params);
  return run_with("cpml", layout(scene, params.thickness), cpml);
}

SchemeRun run_ddf(const Scene& scene, const abc::DdfModel& model) {
  scene.validate();
  abc::ForestRingModel ring_model(model.edge, model.corner, model.stencil, model.encoding);
  abc::DdfBoundary ddf(ring_model, model.stencil, model.clamp);
  SchemeRun out = run_with("ddf", layout(scene, 1), ddf);
  out.clamp_count = ddf.clamp_count();
  out.max_abs_prediction = ddf.max_abs_prediction();
  return out;
}

}  // namespace ddfabc::harness
