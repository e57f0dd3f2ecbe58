#pragma once

#include "ddfabc/fdtd/simulation.hpp"
#include "ddfabc/scene.hpp"

namespace ddfabc::harness {

struct ReferenceOptions {
  int margin = 10;                 // cells beyond the light-travel bound
  double memory_cap_mb = 4096.0;   // refuse grids whose fields would exceed this
};

struct Enlargement {
  int x = 0;
  int y = 0;
};

/// Cells added on each side so that nothing reflected by the outer wall
/// returns within n_steps: ceil(c n dt / (2 cell)) + margin. Zero for a
/// zero-step run.
Enlargement reference_enlargement(const Scene& scene, int margin);

/// Bytes the reference run would allocate for its field arrays.
double reference_memory_mb(const Scene& scene, int margin);

/// The scene in a PEC box large enough to be reflection-free at the probe
/// for the whole run. Throws ConfigError when the grid exceeds the cap.
fdtd::ProbeRecord reference_run(const Scene& scene, const ReferenceOptions& options = {});

}  // namespace ddfabc::harness
