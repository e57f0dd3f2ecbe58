#include "ddfabc/fdtd/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ddfabc/constants.hpp"
#include "ddfabc/errors.hpp"

namespace ddfabc::fdtd {

double courant_limit(double dx, double dy) {
  if (!(dx > 0.0) || !(dy > 0.0)) {
    throw ArgumentError("courant_limit: cell sizes must be positive");
  }
  return 1.0 / (phys::kC0 * std::sqrt(1.0 / (dx * dx) + 1.0 / (dy * dy)));
}

void GridSpec::validate() const {
  if (!(dx > 0.0) || !(dy > 0.0)) throw ArgumentError("grid: dx and dy must be positive");
  if (nx < 8 || ny < 8) {
    throw ArgumentError("grid: nx and ny must be at least 8 (got " + std::to_string(nx) + "x" +
                        std::to_string(ny) + ")");
  }
  if (!(dt > 0.0)) throw ArgumentError("grid: dt must be positive");
  if (dt > courant_limit(dx, dy)) throw ArgumentError("grid: dt exceeds the Courant limit");
  if (n_steps < 0) throw ArgumentError("grid: n_steps must be non-negative");
}

void Array2D::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

void FieldGrid::clear() {
  ex.fill(0.0);
  ey.fill(0.0);
  hz.fill(0.0);
}

namespace {

bool finite(const Array2D& a) {
  return std::all_of(a.data().begin(), a.data().end(), [](double v) { return std::isfinite(v); });
}

double max_abs_of(const Array2D& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

bool FieldGrid::all_finite() const { return finite(ex) && finite(ey) && finite(hz); }

double FieldGrid::max_abs() const {
  return std::max({max_abs_of(ex), max_abs_of(ey), max_abs_of(hz)});
}

}  // namespace ddfabc::fdtd
