#include "ddfabc/scene.hpp"

#include "ddfabc/errors.hpp"

namespace ddfabc {

double Scene::time_step() const { return dt > 0.0 ? dt : 0.5 * fdtd::courant_limit(dx, dy); }

Scene Scene::grown(int cells) const {
  Scene s = *this;
  s.gap += cells;
  return s;
}

void Scene::validate() const {
  if (gap < 1 || sheet_width < 1 || sheet_thickness < 0) throw ArgumentError("scene: bad sheet geometry");
  const Layout l = layout(*this, 0, 0);
  const auto in_region_ey = [&](const fdtd::EdgeIndex& e) {
    return e.i > 0 && e.i < region_nx() && e.j >= 0 && e.j < region_ny();
  };
  if (!in_region_ey(l.source.position)) throw ArgumentError("scene: source outside the physical region");
  if (l.probe.i < 0 || l.probe.i > region_nx() || l.probe.j < 0 || l.probe.j >= region_ny()) {
    throw ArgumentError("scene: probe outside the physical region");
  }
  const auto on_sheet = [&](const fdtd::EdgeIndex& e) {
    return e.i >= l.sheet.i_start && e.i <= l.sheet.i_end && e.j >= l.sheet.j_row &&
           e.j < l.sheet.j_row + l.sheet.thickness;
  };
  if (on_sheet(l.source.position)) throw ArgumentError("scene: source on the PEC sheet");
}

Layout layout(const Scene& scene, int pad_x, int pad_y) {
  Layout l;
  l.pad_x = pad_x;
  l.pad_y = pad_y;
  l.grid.nx = scene.region_nx() + 2 * pad_x;
  l.grid.ny = scene.region_ny() + 2 * pad_y;
  l.grid.dx = scene.dx;
  l.grid.dy = scene.dy;
  l.grid.dt = scene.time_step();
  l.grid.n_steps = scene.n_steps;

  l.sheet.i_start = pad_x + scene.gap;
  l.sheet.i_end = l.sheet.i_start + scene.sheet_width;
  l.sheet.j_row = pad_y + scene.gap;
  l.sheet.thickness = scene.sheet_thickness;

  l.source.t_w = scene.t_w;
  l.source.t0 = scene.t0;
  l.source.amplitude = scene.amplitude;
  l.source.position = {l.sheet.i_start + scene.sheet_width / 2 + scene.source_offset_x,
                       l.sheet.j_row + scene.sheet_thickness + scene.source_offset_y};
  l.probe = {l.sheet.i_end + scene.probe_offset_x, l.sheet.j_row + scene.probe_offset_y};
  return l;
}

fdtd::PecMask Layout::pec_mask() const {
  fdtd::PecMask mask(grid.nx, grid.ny);
  mask.add(sheet);
  return mask;
}

}  // namespace ddfabc
