#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ddfabc/dataset/sample_set.hpp"
#include "ddfabc/dataset/stencil.hpp"
#include "ddfabc/forest/forest.hpp"
#include "ddfabc/forest/train.hpp"
#include "ddfabc/harness/reference.hpp"
#include "ddfabc/key_value.hpp"
#include "ddfabc/pml/cpml.hpp"
#include "ddfabc/scene.hpp"

namespace ddfabc::harness {

struct DatasetOptions {
  int scenarios = 1;
  std::uint64_t seed = 1;
  bool jitter = true;
  int step_stride = 1;
  bool drop_silent_rows = false;
  std::uint64_t split_seed = 1;
  dataset::SplitRatios split{};
};

struct TrainOptions {
  int n_trees = 32;
  int depth = 6;
  forest::TrainConfig config{};
  dataset::TargetEncoding encoding{};
  std::size_t max_rows = 0;  // cap on training rows after the split; 0 keeps all
};

struct DdfOptions {
  std::string model;                 // edge forest path; sidecars beside it
  std::string clamp = "auto";        // auto | off | positive number
  double clamp_factor = 10.0;
};

/// Every setting the tools use, fully resolved.
struct Config {
  Scene scene{};
  pml::PmlParams pml{};
  dataset::StencilSpec stencil{};
  DatasetOptions data{};
  TrainOptions train{};
  DdfOptions ddf{};
  ReferenceOptions reference{};
  std::vector<std::string> schemes{"pec", "cpml", "ddf"};

  void validate() const;
};

/// `key = value` lines; '#' starts a comment. Unknown keys, malformed
/// values and duplicates throw ConfigError. `tool.*` and `hash.*` keys
/// (written by manifests) are accepted and returned in `extras`.
KeyValues parse_config_text(const std::string& text);
Config config_from(const KeyValues& kv, KeyValues* extras = nullptr);
Config load_config(const std::filesystem::path& path, KeyValues* extras = nullptr);

/// All keys, values printed so that parsing them back is exact.
KeyValues to_key_values(const Config& config);

/// Applies one `key=value` override on top of `config`.
void set_option(Config& config, const std::string& key, const std::string& value);

/// Every key the parser knows, sorted.
std::vector<std::string> known_keys();

/// 64-bit FNV-1a of a file's bytes as 16 hex digits.
std::string file_hash(const std::filesystem::path& path);

/// Resolved configuration plus tool version and a `hash.<file>` line per
/// input artifact.
struct RunManifest {
  Config config;
  std::string tool = "ddfabc";
  std::string version;
  std::vector<std::filesystem::path> inputs;

  KeyValues to_key_values() const;
  void write(const std::filesystem::path& path) const;
};

/// Throws ConfigError when a `hash.<file>` entry no longer matches the file.
void verify_hashes(const KeyValues& extras);

}  // namespace ddfabc::harness
