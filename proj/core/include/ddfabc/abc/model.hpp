#pragma once

#include <filesystem>
#include <optional>

#include "ddfabc/abc/ddf_boundary.hpp"
#include "ddfabc/dataset/sample_set.hpp"
#include "ddfabc/dataset/stencil.hpp"
#include "ddfabc/forest/forest.hpp"
#include "ddfabc/key_value.hpp"

namespace ddfabc::abc {

/// Everything a learned boundary needs. On disk: the edge forest at `path`,
/// the corner forest at `path`.corner and a key=value sidecar at `path`.meta
/// holding the stencil, the teacher's max |field|, the clamp and the
/// target encoding.
struct DdfModel {
  forest::Forest edge;
  forest::Forest corner;
  dataset::StencilSpec stencil;
  double max_abs_field = 0.0;
  std::optional<double> clamp;  // none: guard off
  dataset::TargetEncoding encoding;
  KeyValues metadata;           // provenance, written as-is
};

std::filesystem::path corner_path(const std::filesystem::path& model);
std::filesystem::path meta_path(const std::filesystem::path& model);

void save_ddf_model(const std::filesystem::path& path, const DdfModel& model);

/// Throws ConfigError when the sidecar's stencil disagrees with either
/// forest, FormatError on unreadable files.
DdfModel load_ddf_model(const std::filesystem::path& path);

/// Stencil recorded under `prefix`inward_depth etc.
dataset::StencilSpec stencil_from(const KeyValues& kv, const std::string& prefix = "stencil.");
void stencil_to(const dataset::StencilSpec& stencil, KeyValues& kv, const std::string& prefix = "stencil.");

}  // namespace ddfabc::abc
