#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ddfabc/forest/train.hpp"

namespace ddfabc::dataset {

inline constexpr std::string_view kDatasetMagic = "DDFDS001";

/// N rows of M features plus one target, with free-form provenance.
struct SampleSet {
  int n_features = 0;
  std::vector<double> features;  // row-major
  std::vector<double> targets;
  std::map<std::string, std::string> metadata;

  std::size_t rows() const { return targets.size(); }
  std::span<const double> row(std::size_t r) const {
    return {features.data() + r * static_cast<std::size_t>(n_features), static_cast<std::size_t>(n_features)};
  }
  void append(std::span<const double> x, double y);

  forest::RawData raw() const { return {features, targets, n_features}; }

  /// Largest |value| over features and targets.
  double max_abs_value() const;

  /// Throws ArgumentError when empty, ragged or non-finite.
  void validate() const;
};

/// Little-endian: "DDFDS001" | u32 n_rows | u32 M | u32 metadata bytes |
/// metadata (UTF-8 key=value lines) | n_rows x M f64 | n_rows f64.
void write_dataset(std::ostream& out, const SampleSet& set);
SampleSet read_dataset(std::istream& in);
void save_dataset(const std::filesystem::path& path, const SampleSet& set);
SampleSet load_dataset(const std::filesystem::path& path);

/// Header f1..fM,target; %.17g values.
void write_csv(std::ostream& out, const SampleSet& set);

/// Largest |x_i| of a row.
double row_scale(std::span<const double> x);

/// How a ring model's output relates to the ring value y for features x.
///   amplitude_scaling: the model sees x / s and its output is scaled by s,
///     s = row_scale(x); zero rows predict 0. Valid because the fields obey
///     linear equations.
///   increment: the model predicts y minus the ring's own current value
///     x[self_index].
struct TargetEncoding {
  bool amplitude_scaling = false;
  bool increment = false;

  /// Records the encoding in `meta` as "amplitude_scaling" and "target".
  void store(std::map<std::string, std::string>& meta) const;
  /// Reads it back; missing keys mean the plain encoding. Throws
  /// ConfigError on unknown values.
  static TargetEncoding load(const std::map<std::string, std::string>& meta);
};

/// Rows as the model is trained on them under `encoding`. Zero rows are
/// dropped when scaling. Throws ArgumentError when increments are asked
/// for but the stencil has no Ey.
SampleSet encode_targets(const SampleSet& set, int self_index, const TargetEncoding& encoding);

struct SplitRatios {
  double train = 0.8;
  double valid = 0.1;
  double test = 0.1;
};

struct Split {
  SampleSet train;
  SampleSet valid;
  SampleSet test;
};

/// Seeded shuffle, then contiguous train/valid/test parts. Throws
/// ArgumentError when ratios are not positive, do not sum to 1, or would
/// leave a part empty.
Split split(const SampleSet& set, const SplitRatios& ratios, std::uint64_t seed);

/// Subset of rows in the given order, metadata copied.
SampleSet select_rows(const SampleSet& set, std::span<const std::size_t> rows);

}  // namespace ddfabc::dataset
