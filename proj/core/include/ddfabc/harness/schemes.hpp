#pragma once

#include <cstdint>
#include <string>

#include "ddfabc/abc/model.hpp"
#include "ddfabc/fdtd/simulation.hpp"
#include "ddfabc/pml/cpml.hpp"
#include "ddfabc/scene.hpp"

namespace ddfabc::harness {

/// Probe series of one truncation scheme on a scene.
struct SchemeRun {
  std::string scheme;
  fdtd::ProbeRecord probe;
  fdtd::EdgeIndex probe_in_region{};  // probe relative to the physical region
  std::int64_t cells = 0;
  std::int64_t clamp_count = 0;
  double max_abs_prediction = 0.0;
};

/// Physical region plus one PEC ring.
SchemeRun run_pec(const Scene& scene);

/// Physical region plus `params.thickness` CPML cells.
SchemeRun run_cpml(const Scene& scene, const pml::PmlParams& params);

/// Physical region plus one learned ring. Throws fdtd::RunAborted on
/// instability.
SchemeRun run_ddf(const Scene& scene, const abc::DdfModel& model);

}  // namespace ddfabc::harness
