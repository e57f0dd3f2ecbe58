#include "ddfabc/harness/reference.hpp"

#include <cmath>
#include <string>

#include "ddfabc/constants.hpp"
#include "ddfabc/errors.hpp"

namespace ddfabc::harness {

Enlargement reference_enlargement(const Scene& scene, int margin) {
  if (scene.n_steps <= 0) return {};
  const double travel = phys::kC0 * static_cast<double>(scene.n_steps) * scene.time_step() / 2.0;
  return {static_cast<int>(std::ceil(travel / scene.dx)) + margin,
          static_cast<int>(std::ceil(travel / scene.dy)) + margin};
}

double reference_memory_mb(const Scene& scene, int margin) {
  const auto e = reference_enlargement(scene, margin);
  const double nx = scene.region_nx() + 2.0 * e.x;
  const double ny = scene.region_ny() + 2.0 * e.y;
  // ex, ey, hz plus the PEC flags
  return (3.0 * 8.0 + 2.0) * (nx + 1.0) * (ny + 1.0) / (1024.0 * 1024.0);
}

fdtd::ProbeRecord reference_run(const Scene& scene, const ReferenceOptions& options) {
  scene.validate();
  if (scene.n_steps <= 0) {
    fdtd::ProbeRecord empty;
    empty.dt = scene.time_step();
    empty.ey.resize(1);
    empty.probes.push_back(layout(scene, 0).probe);
    return empty;
  }
  const double mb = reference_memory_mb(scene, options.margin);
  if (mb > options.memory_cap_mb) {
    throw ConfigError("reference grid needs " + std::to_string(mb) + " MB, cap is " +
                      std::to_string(options.memory_cap_mb) + " MB");
  }
  const auto e = reference_enlargement(scene, options.margin);
  const Layout l = layout(scene, e.x, e.y);
  fdtd::PecBoundary walls;
  const fdtd::EdgeIndex probes[] = {l.probe};
  return fdtd::run(l.grid, l.source, l.pec_mask(), walls, probes);
}

}  // namespace ddfabc::harness
