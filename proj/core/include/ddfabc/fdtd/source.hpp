#pragma once

#include "ddfabc/fdtd/grid.hpp"

namespace ddfabc::fdtd {

struct EdgeIndex {
  int i = 0;
  int j = 0;
  bool operator==(const EdgeIndex&) const = default;
};

/// Differentiated-Gaussian line current feeding one Ey edge.
struct SourceSpec {
  double t_w = 26.53e-12;
  double t0 = 4.0 * 26.53e-12;
  EdgeIndex position{};
  double amplitude = 1.0;

  void validate() const;
};

/// J_y(t) = -2 tau exp(-tau^2), tau = (t - t0) / t_w.
double pulse(const SourceSpec& src, double t);

/// Soft source: ey[src] -= dt/eps0 * J_y(t) / dx * amplitude.
void inject_source(FieldGrid& grid, const SourceSpec& src, double t, const GridSpec& spec);

}  // namespace ddfabc::fdtd
