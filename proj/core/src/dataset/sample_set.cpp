#include "ddfabc/dataset/sample_set.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "ddfabc/binary_io.hpp"
#include "ddfabc/errors.hpp"
#include "ddfabc/key_value.hpp"
#include "ddfabc/rng.hpp"

namespace ddfabc::dataset {

void SampleSet::append(std::span<const double> x, double y) {
  if (x.size() != static_cast<std::size_t>(n_features)) throw ArgumentError("sample set: row has the wrong width");
  features.insert(features.end(), x.begin(), x.end());
  targets.push_back(y);
}

double SampleSet::max_abs_value() const {
  double m = 0.0;
  for (double v : features) m = std::max(m, std::abs(v));
  for (double v : targets) m = std::max(m, std::abs(v));
  return m;
}

void SampleSet::validate() const {
  if (n_features < 1) throw ArgumentError("sample set: M must be positive");
  if (targets.empty()) throw ArgumentError("sample set: no rows");
  if (features.size() != targets.size() * static_cast<std::size_t>(n_features)) {
    throw ArgumentError("sample set: feature matrix does not match row count");
  }
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(features.begin(), features.end(), finite) || !std::all_of(targets.begin(), targets.end(), finite)) {
    throw ArgumentError("sample set: non-finite value");
  }
  if (auto it = metadata.find("stencil.m"); it != metadata.end() && std::stoi(it->second) != n_features) {
    throw ArgumentError("sample set: metadata M does not match matrix width");
  }
}


void write_dataset(std::ostream& out, const SampleSet& set) {
  out.write(kDatasetMagic.data(), static_cast<std::streamsize>(kDatasetMagic.size()));
  binio::put_u32(out, static_cast<std::uint32_t>(set.rows()));
  binio::put_u32(out, static_cast<std::uint32_t>(set.n_features));
  const std::string meta = format_key_values(set.metadata);
  binio::put_u32(out, static_cast<std::uint32_t>(meta.size()));
  out.write(meta.data(), static_cast<std::streamsize>(meta.size()));
  for (double v : set.features) binio::put_f64(out, v);
  for (double v : set.targets) binio::put_f64(out, v);
  if (!out) throw FormatError("dataset: write failed");
}

SampleSet read_dataset(std::istream& in) {
  char magic[8];
  if (!in.read(magic, 8) || std::string_view(magic, 8) != kDatasetMagic) {
    throw FormatError("dataset: bad magic (expected DDFDS001)");
  }
  SampleSet set;
  const std::uint32_t rows = binio::get_u32(in);
  set.n_features = static_cast<int>(binio::get_u32(in));
  const std::uint32_t meta_len = binio::get_u32(in);
  if (set.n_features < 1 || meta_len > (1u << 26)) throw FormatError("dataset: implausible header");
  std::string meta(meta_len, '\0');
  if (!in.read(meta.data(), meta_len)) throw FormatError("dataset: truncated metadata");
  set.metadata = parse_key_values(meta, "dataset");
  set.features.resize(static_cast<std::size_t>(rows) * set.n_features);
  for (double& v : set.features) v = binio::get_f64(in);
  set.targets.resize(rows);
  for (double& v : set.targets) v = binio::get_f64(in);
  return set;
}

void save_dataset(const std::filesystem::path& path, const SampleSet& set) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write dataset file " + path.string());
  write_dataset(out, set);
}

SampleSet load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open dataset file " + path.string());
  return read_dataset(in);
}

void write_csv(std::ostream& out, const SampleSet& set) {
  for (int i = 1; i <= set.n_features; ++i) out << 'f' << i << ',';
  out << "target\n";
  char buf[40];
  for (std::size_t r = 0; r < set.rows(); ++r) {
    for (double v : set.row(r)) {
      std::snprintf(buf, sizeof buf, "%.17g,", v);
      out << buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g\n", set.targets[r]);
    out << buf;
  }
}

SampleSet select_rows(const SampleSet& set, std::span<const std::size_t> rows) {
  SampleSet out;
  out.n_features = set.n_features;
  out.metadata = set.metadata;
  out.features.reserve(rows.size() * static_cast<std::size_t>(set.n_features));
  out.targets.reserve(rows.size());
  for (std::size_t r : rows) out.append(set.row(r), set.targets[r]);
  return out;
}

Split split(const SampleSet& set, const SplitRatios& ratios, std::uint64_t seed) {
  if (!(ratios.train > 0.0) || !(ratios.valid > 0.0) || !(ratios.test > 0.0)) {
    throw ArgumentError("split: ratios must be positive");
  }
  if (std::abs(ratios.train + ratios.valid + ratios.test - 1.0) > 1e-9) {
    throw ArgumentError("split: ratios must sum to 1");
  }
  const std::size_t n = set.rows();
  const auto n_train = static_cast<std::size_t>(std::llround(ratios.train * static_cast<double>(n)));
  const auto n_valid = static_cast<std::size_t>(std::llround(ratios.valid * static_cast<double>(n)));
  if (n_train == 0 || n_valid == 0 || n_train + n_valid >= n) {
    throw ArgumentError("split: " + std::to_string(n) + " rows leave an empty part");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  shuffle(std::span<std::size_t>(order), rng);
  const std::span<const std::size_t> all(order);
  Split s;
  s.train = select_rows(set, all.subspan(0, n_train));
  s.valid = select_rows(set, all.subspan(n_train, n_valid));
  s.test = select_rows(set, all.subspan(n_train + n_valid));
  return s;
}

double row_scale(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s = std::max(s, std::abs(v));
  return s;
}

void TargetEncoding::store(std::map<std::string, std::string>& meta) const {
  meta["amplitude_scaling"] = amplitude_scaling ? "row_max" : "none";
  meta["target"] = increment ? "increment" : "value";
}

TargetEncoding TargetEncoding::load(const std::map<std::string, std::string>& meta) {
  TargetEncoding e;
  if (auto it = meta.find("amplitude_scaling"); it != meta.end()) {
    if (it->second == "row_max") {
      e.amplitude_scaling = true;
    } else if (it->second != "none") {
      throw ConfigError("unknown amplitude_scaling '" + it->second + "'");
    }
  }
  if (auto it = meta.find("target"); it != meta.end()) {
    if (it->second == "increment") {
      e.increment = true;
    } else if (it->second != "value") {
      throw ConfigError("unknown target encoding '" + it->second + "'");
    }
  }
  return e;
}

SampleSet encode_targets(const SampleSet& set, int self_index, const TargetEncoding& encoding) {
  if (encoding.increment && (self_index < 0 || self_index >= set.n_features)) {
    throw ArgumentError("encode_targets: increments need the ring's own Ey among the features");
  }
  SampleSet out;
  out.n_features = set.n_features;
  out.metadata = set.metadata;
  encoding.store(out.metadata);
  std::vector<double> row(static_cast<std::size_t>(set.n_features));
  for (std::size_t r = 0; r < set.rows(); ++r) {
    const auto x = set.row(r);
    double y = set.targets[r];
    if (encoding.increment) y -= x[static_cast<std::size_t>(self_index)];
    double s = 1.0;
    if (encoding.amplitude_scaling) {
      s = row_scale(x);
      if (s == 0.0) continue;
    }
    for (std::size_t i = 0; i < row.size(); ++i) row[i] = x[i] / s;
    out.append(row, y / s);
  }
  return out;
}

}  // namespace ddfabc::dataset
