#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ddfabc/fdtd/grid.hpp"

namespace ddfabc::dataset {

/// Field components named in the canonical frame, where the boundary is the
/// left edge of the grid: Ex is normal to it, Ey tangential.
enum class Component { kEx, kEy, kHz };

/// Which fields around a ring edge become features.
struct StencilSpec {
  int inward_depth = 3;          // cell layers, the ring's own layer included
  int tangential_halfwidth = 1;  // neighbours on each side along the edge
  std::vector<Component> components{Component::kEx, Component::kEy, Component::kHz};
  int time_levels = 2;           // snapshots n and n - 1

  int feature_count() const;
  void validate() const;

  /// Feature index of the edge's own tangential E at step n; -1 when Ey is
  /// not among the components.
  int self_index() const;

  /// "ex,ey,hz" style list.
  std::string components_string() const;
  static std::vector<Component> parse_components(std::string_view list);

  bool operator==(const StencilSpec&) const = default;
};

enum class Side { kLeft, kRight, kBottom, kTop };

std::string to_string(Side side);

/// One tangential-E edge on the outer ring of an nx x ny grid. `index` runs
/// along the side (row for left/right, column for bottom/top). Corner edges
/// are those whose tangential neighbourhood leaves the grid.
struct RingEdge {
  Side side = Side::kLeft;
  int index = 0;
  bool corner = false;
};

/// Left, right, bottom, top; ascending index within each side.
std::vector<RingEdge> ring_edges(int nx, int ny, const StencilSpec& stencil);

double ring_value(const fdtd::FieldGrid& grid, const RingEdge& edge);
double& ring_value(fdtd::FieldGrid& grid, const RingEdge& edge);

/// Sign relating the canonical tangential E to the physical value written
/// on the ring. All four mappings keep it at +1; kept explicit for clarity at
/// call sites.
double target_sign(Side side);

/// Features of one snapshot for `edge`, rotated/reflected into the
/// canonical frame with vector and pseudovector signs applied. Positions
/// outside the grid read as zero. Writes inward_depth x (2h + 1) x
/// |components| values ordered depth, tangential offset, component.
void gather_level(const fdtd::FieldGrid& snapshot, const RingEdge& edge, const StencilSpec& stencil,
                  std::span<double> out);

/// Full feature row: the `current` snapshot's block then `previous`.
void assemble_features(const fdtd::FieldGrid& current, const fdtd::FieldGrid& previous, const RingEdge& edge,
                       const StencilSpec& stencil, std::span<double> out);

/// Copies every entry gather_level can read, and nothing else, from `src`
/// into `dst` (same dimensions).
void copy_band(const fdtd::FieldGrid& src, fdtd::FieldGrid& dst, const StencilSpec& stencil);

}  // namespace ddfabc::dataset
