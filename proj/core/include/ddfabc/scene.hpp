#pragma once

#include <cstdint>
#include <vector>

#include "ddfabc/fdtd/grid.hpp"
#include "ddfabc/fdtd/pec.hpp"
#include "ddfabc/fdtd/source.hpp"

namespace ddfabc {

/// The physical scene independent of how the grid is truncated: a PEC sheet
/// surrounded by a vacuum gap, a line source above it and a probe off one
/// end. The physical region is the sheet's bounding box grown by `gap`
/// cells on every side.
struct Scene {
  double dx = 1e-3;
  double dy = 1e-3;
  double dt = 0.0;  // 0 selects half the Courant limit
  std::int64_t n_steps = 1500;

  int gap = 3;
  int sheet_width = 100;
  int sheet_thickness = 0;

  // Source Ey edge relative to (sheet centre column, sheet top row).
  int source_offset_x = 0;
  int source_offset_y = 2;
  // Probe Ey edge relative to (sheet right end column, sheet row).
  int probe_offset_x = 2;
  int probe_offset_y = 0;

  double t_w = 26.53e-12;
  double t0 = 4.0 * 26.53e-12;
  double amplitude = 1.0;

  int region_nx() const { return sheet_width + 2 * gap; }
  int region_ny() const { return sheet_thickness + 2 * gap; }
  double time_step() const;

  /// Same scene with the vacuum gap widened by `cells`; the sheet, source and
  /// probe keep their places relative to each other.
  Scene grown(int cells) const;

  /// Throws ArgumentError when source or probe falls outside the region or
  /// onto the sheet.
  void validate() const;

  bool operator==(const Scene&) const = default;
};

/// A scene placed in a grid with `pad_x`/`pad_y` extra cells on each side of
/// the physical region.
struct Layout {
  fdtd::GridSpec grid;
  fdtd::PecSheet sheet;
  fdtd::SourceSpec source;
  fdtd::EdgeIndex probe;
  int pad_x = 0;
  int pad_y = 0;

  fdtd::PecMask pec_mask() const;
};

Layout layout(const Scene& scene, int pad_x, int pad_y);
inline Layout layout(const Scene& scene, int pad) { return layout(scene, pad, pad); }

}  // namespace ddfabc
