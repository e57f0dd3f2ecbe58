#include "ddfabc/fdtd/updates.hpp"

#include <cmath>

#include "ddfabc/constants.hpp"
#include "ddfabc/errors.hpp"

namespace ddfabc::fdtd {

void step_h(FieldGrid& grid, const GridSpec& spec, std::int64_t step) {
  const int nx = grid.nx();
  const int ny = grid.ny();
  const double ch = spec.dt / phys::kMu0;
  const double rdx = 1.0 / spec.dx;
  const double rdy = 1.0 / spec.dy;
  double check = 0.0;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      double& h = grid.hz(i, j);
      h -= ch * ((grid.ey(i + 1, j) - grid.ey(i, j)) * rdx - (grid.ex(i, j + 1) - grid.ex(i, j)) * rdy);
      check += h;
    }
  }
  if (!std::isfinite(check)) throw InstabilityError("non-finite Hz", step);
}

void step_e(FieldGrid& grid, const GridSpec& spec, const PecMask& pec, std::int64_t step) {
  const int nx = grid.nx();
  const int ny = grid.ny();
  const double ce = spec.dt / phys::kEps0;
  const double rdx = 1.0 / spec.dx;
  const double rdy = 1.0 / spec.dy;
  double check = 0.0;
  for (int i = 0; i < nx; ++i) {
    for (int j = 1; j < ny; ++j) {
      double& e = grid.ex(i, j);
      e += ce * (grid.hz(i, j) - grid.hz(i, j - 1)) * rdy;
      check += e;
    }
  }
  for (int i = 1; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      double& e = grid.ey(i, j);
      e -= ce * (grid.hz(i, j) - grid.hz(i - 1, j)) * rdx;
      check += e;
    }
  }
  if (!std::isfinite(check)) throw InstabilityError("non-finite E", step);
  pec.apply(grid);
}

}  // namespace ddfabc::fdtd
