#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ddfabc/abc/model.hpp"
#include "ddfabc/dataset/extract.hpp"
#include "ddfabc/harness/config.hpp"
#include "ddfabc/harness/reflection.hpp"
#include "ddfabc/harness/schemes.hpp"

namespace ddfabc::harness {

/// Teacher runs over the configured scenario sweep.
dataset::ExtractedSamples extract(const Config& config);

struct TrainedModel {
  abc::DdfModel model;
  forest::TrainResult edge;
  forest::TrainResult corner;
  double edge_test_nmse = 0.0;    // in encoded target units
  double corner_test_nmse = 0.0;
};

/// Splits, encodes and trains both forests, then resolves the clamp from
/// the configuration and the data's max |field|.
TrainedModel train_model(const Config& config, const dataset::SampleSet& edge, const dataset::SampleSet& corner);

/// Resolves ddf.clamp: "off" disables the guard, "auto" keeps the value
/// stored with the model (or derives it from max |field|), a number wins.
std::optional<double> resolve_clamp(const DdfOptions& options, double max_abs_field,
                                    std::optional<double> stored = std::nullopt);

/// Loads ddf.model with the configured clamp. Throws ConfigError when the
/// files are missing or inconsistent.
abc::DdfModel load_configured_model(const Config& config);

/// Runs one of "pec", "cpml", "ddf". `model` must be set for ddf.
SchemeRun run_scheme(const Config& config, const std::string& scheme, const abc::DdfModel* model);

struct Comparison {
  fdtd::ProbeRecord reference;
  std::vector<SchemeRun> runs;
  std::vector<ReflectionReport> reports;
};

/// Every scheme against one shared reference.
Comparison compare(const Config& config, const std::vector<std::string>& schemes, const abc::DdfModel* model);

/// `step,t_seconds,rdb_<scheme>...`, one row per step.
void write_comparison_csv(std::ostream& out, const Comparison& comparison);

/// Line chart of R_dB(t) per scheme.
void write_comparison_svg(std::ostream& out, const Comparison& comparison);

/// One line per scheme: r_db_max, probe, cell count, clamp triggers.
void write_summary(std::ostream& out, const Comparison& comparison);

}  // namespace ddfabc::harness
