#pragma once

#include <cstdint>

#include "ddfabc/fdtd/grid.hpp"
#include "ddfabc/fdtd/pec.hpp"

namespace ddfabc::fdtd {

/// Vacuum Faraday update of every hz cell:
///   hz -= dt/mu0 * ((ey(i+1,j) - ey(i,j))/dx - (ex(i,j+1) - ex(i,j))/dy).
/// Throws InstabilityError tagged with `step` on a non-finite result.
void step_h(FieldGrid& grid, const GridSpec& spec, std::int64_t step = 0);

/// Vacuum Ampere update of interior ex/ey followed by the PEC mask. Outer
/// boundary edges are left untouched.
void step_e(FieldGrid& grid, const GridSpec& spec, const PecMask& pec, std::int64_t step = 0);

}  // namespace ddfabc::fdtd
