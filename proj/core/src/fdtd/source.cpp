#include "ddfabc/fdtd/source.hpp"

#include <cmath>

#include "ddfabc/constants.hpp"
#include "ddfabc/errors.hpp"

namespace ddfabc::fdtd {

void SourceSpec::validate() const {
  if (!(t_w > 0.0)) throw ArgumentError("source: t_w must be positive");
  if (!(t0 >= 3.0 * t_w)) throw ArgumentError("source: t0 must be at least 3 t_w");
}

double pulse(const SourceSpec& src, double t) {
  const double tau = (t - src.t0) / src.t_w;
  return -2.0 * tau * std::exp(-tau * tau);
}

void inject_source(FieldGrid& grid, const SourceSpec& src, double t, const GridSpec& spec) {
  grid.ey(src.position.i, src.position.j) -=
      spec.dt / phys::kEps0 * pulse(src, t) / spec.dx * src.amplitude;
}

}  // namespace ddfabc::fdtd
