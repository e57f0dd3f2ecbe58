#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ddfabc/dataset/sample_set.hpp"
#include "ddfabc/dataset/stencil.hpp"
#include "ddfabc/fdtd/simulation.hpp"
#include "ddfabc/pml/cpml.hpp"
#include "ddfabc/scene.hpp"

namespace ddfabc::dataset {

/// Per-step callback of a teacher run, in the coordinates of the learned
/// boundary's domain (the physical region plus one ring):
///   snapshot: interior at the end of step n, ring still at its step-n value
///             (exactly what the learned boundary sees when it is applied);
///   updated:  the same with the ring advanced by the teacher.
using TeacherObserver =
    std::function<void(std::int64_t step, const fdtd::FieldGrid& snapshot, const fdtd::FieldGrid& updated)>;

/// CPML wrapper that exposes the interface ring of the inner domain. The
/// teacher grid is the inner domain padded by `params.thickness` PML cells.
class TeacherRecorder final : public fdtd::BoundaryHandler {
 public:
  TeacherRecorder(pml::PmlParams params, TeacherObserver observer);

  void reset(const fdtd::FieldGrid& grid, const fdtd::GridSpec& spec) override;
  void after_h(fdtd::FieldGrid& grid, std::int64_t step) override;
  void apply(fdtd::FieldGrid& grid, std::int64_t step) override;
  std::string name() const override { return "cpml-teacher"; }

 private:
  pml::CpmlBoundary pml_;
  TeacherObserver observer_;
  int offset_;
  fdtd::FieldGrid snapshot_;
  fdtd::FieldGrid updated_;
};

/// Probe series plus every ring value the teacher produced, step-major in
/// ring_edges() order.
struct TeacherRun {
  fdtd::ProbeRecord probe;
  std::vector<RingEdge> ring;
  std::vector<std::vector<double>> ring_values;
};

/// Runs the scene grown by one ring and truncated by the CPML. The probe is
/// the scene's probe.
TeacherRun run_teacher(const Scene& scene, const pml::PmlParams& params, const StencilSpec& stencil,
                       const TeacherObserver& observer = {});

struct TeacherConfig {
  std::vector<Scene> scenarios;
  pml::PmlParams pml{};
  StencilSpec stencil{};
  std::uint64_t seed = 0;  // recorded only
  int step_stride = 1;     // keep every step_stride-th step
  bool drop_silent_rows = false;  // skip rows whose features and target are all zero
};

struct ExtractedSamples {
  SampleSet edge;
  SampleSet corner;
};

/// Teacher runs for every scenario, pooled after canonicalization. Rows for
/// step n >= 1 hold snapshots n and n-1 as features and the ring value the
/// teacher wrote at step n as target. Throws ArgumentError when no rows
/// result.
ExtractedSamples extract_samples(const TeacherConfig& config);

/// Scenario 0 is `base`; with jitter the rest move the source to a random
/// Ey edge of the physical region and scale t_w (with t0) and the amplitude
/// by independent factors in [0.5, 2].
std::vector<Scene> scenario_sweep(const Scene& base, int n_scenarios, std::uint64_t seed, bool jitter = true);

}  // namespace ddfabc::dataset
