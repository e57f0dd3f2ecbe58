#include "ddfabc/harness/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "ddfabc/errors.hpp"

namespace ddfabc::harness {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
}

long long to_integer(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long i = std::stoll(v, &used);
    if (used == v.size()) return i;
  } catch (const std::exception&) {
  }
  throw ConfigError("config: '" + key + "' expects an integer, got '" + v + "'");
}

int to_int(const std::string& key, const std::string& v) {
  const long long i = to_integer(key, v);
  if (i < -2147483647LL || i > 2147483647LL) throw ConfigError("config: '" + key + "' out of range");
  return static_cast<int>(i);
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    if (!v.empty() && v[0] != '-') {
      const unsigned long long u = std::stoull(v, &used);
      if (used == v.size()) return u;
    }
  } catch (const std::exception&) {
  }
  throw ConfigError("config: '" + key + "' expects a non-negative integer, got '" + v + "'");
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config: '" + key + "' expects true or false, got '" + v + "'");
}

std::string from_bool(bool b) { return b ? "true" : "false"; }

struct Key {
  std::string name;
  std::function<void(Config&, const std::string& key, const std::string& value)> set;
  std::function<std::string(const Config&)> get;
};

#define DDF_DOUBLE(NAME, FIELD)                                                                   \
  Key {                                                                                           \
    NAME, [](Config& c, const std::string& k, const std::string& v) { c.FIELD = to_double(k, v); }, \
        [](const Config& c) { return fmt(c.FIELD); }                                              \
  }
#define DDF_INT(NAME, FIELD)                                                                   \
  Key {                                                                                        \
    NAME, [](Config& c, const std::string& k, const std::string& v) { c.FIELD = to_int(k, v); }, \
        [](const Config& c) { return std::to_string(c.FIELD); }                                \
  }
#define DDF_I64(NAME, FIELD)                                                                       \
  Key {                                                                                            \
    NAME, [](Config& c, const std::string& k, const std::string& v) { c.FIELD = to_integer(k, v); }, \
        [](const Config& c) { return std::to_string(c.FIELD); }                                    \
  }
#define DDF_U64(NAME, FIELD)                                                                   \
  Key {                                                                                        \
    NAME, [](Config& c, const std::string& k, const std::string& v) { c.FIELD = to_u64(k, v); }, \
        [](const Config& c) { return std::to_string(c.FIELD); }                                \
  }
#define DDF_BOOL(NAME, FIELD)                                                                   \
  Key {                                                                                         \
    NAME, [](Config& c, const std::string& k, const std::string& v) { c.FIELD = to_bool(k, v); }, \
        [](const Config& c) { return from_bool(c.FIELD); }                                      \
  }

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      DDF_DOUBLE("grid.dx", scene.dx),
      DDF_DOUBLE("grid.dy", scene.dy),
      DDF_DOUBLE("grid.dt", scene.dt),
      DDF_I64("grid.n_steps", scene.n_steps),
      DDF_INT("scene.gap", scene.gap),
      DDF_INT("scene.sheet_width", scene.sheet_width),
      DDF_INT("scene.sheet_thickness", scene.sheet_thickness),
      DDF_INT("source.offset_x", scene.source_offset_x),
      DDF_INT("source.offset_y", scene.source_offset_y),
      DDF_DOUBLE("source.tw", scene.t_w),
      DDF_DOUBLE("source.t0", scene.t0),
      DDF_DOUBLE("source.amplitude", scene.amplitude),
      DDF_INT("probe.offset_x", scene.probe_offset_x),
      DDF_INT("probe.offset_y", scene.probe_offset_y),
      DDF_INT("pml.thickness", pml.thickness),
      DDF_DOUBLE("pml.order", pml.order),
      DDF_DOUBLE("pml.sigma_max_ratio", pml.sigma_max_ratio),
      DDF_DOUBLE("pml.kappa_max", pml.kappa_max),
      DDF_DOUBLE("pml.alpha", pml.alpha),
      DDF_INT("stencil.inward_depth", stencil.inward_depth),
      DDF_INT("stencil.tangential_halfwidth", stencil.tangential_halfwidth),
      Key{"stencil.components",
          [](Config& c, const std::string&, const std::string& v) {
            try {
              c.stencil.components = dataset::StencilSpec::parse_components(v);
            } catch (const ArgumentError& e) {
              throw ConfigError(std::string("config: ") + e.what());
            }
          },
          [](const Config& c) { return c.stencil.components_string(); }},
      DDF_INT("dataset.scenarios", data.scenarios),
      DDF_U64("dataset.seed", data.seed),
      DDF_BOOL("dataset.jitter", data.jitter),
      DDF_INT("dataset.step_stride", data.step_stride),
      DDF_BOOL("dataset.drop_silent_rows", data.drop_silent_rows),
      DDF_U64("dataset.split_seed", data.split_seed),
      DDF_DOUBLE("dataset.train_ratio", data.split.train),
      DDF_DOUBLE("dataset.valid_ratio", data.split.valid),
      DDF_DOUBLE("dataset.test_ratio", data.split.test),
      DDF_INT("train.n_trees", train.n_trees),
      DDF_INT("train.depth", train.depth),
      Key{"train.optimizer",
          [](Config& c, const std::string& k, const std::string& v) {
            forest::OptimizerKind kind;
            try {
              kind = forest::parse_optimizer_kind(v);
            } catch (const ArgumentError&) {
              throw ConfigError("config: '" + k + "' must be sgd, adam or qhadam");
            }
            const double lr = c.train.config.optimizer.learning_rate;
            c.train.config.optimizer = kind == forest::OptimizerKind::kAdam   ? forest::OptimizerConfig::adam(lr)
                                       : kind == forest::OptimizerKind::kSgd ? forest::OptimizerConfig::sgd(lr)
                                                                              : forest::OptimizerConfig::qhadam(lr);
          },
          [](const Config& c) { return forest::to_string(c.train.config.optimizer.kind); }},
      DDF_DOUBLE("train.lr", train.config.optimizer.learning_rate),
      DDF_DOUBLE("train.beta1", train.config.optimizer.beta1),
      DDF_DOUBLE("train.beta2", train.config.optimizer.beta2),
      DDF_DOUBLE("train.nu1", train.config.optimizer.nu1),
      DDF_DOUBLE("train.nu2", train.config.optimizer.nu2),
      DDF_DOUBLE("train.epsilon", train.config.optimizer.epsilon),
      DDF_INT("train.batch_size", train.config.batch_size),
      DDF_INT("train.epochs", train.config.epochs),
      DDF_INT("train.patience", train.config.patience),
      DDF_U64("train.seed", train.config.seed),
      DDF_DOUBLE("train.divergence_factor", train.config.divergence_factor),
      Key{"train.loss",
          [](Config& c, const std::string& k, const std::string& v) {
            try {
              c.train.config.objective.kind = forest::parse_loss_kind(v);
            } catch (const ArgumentError&) {
              throw ConfigError("config: '" + k + "' must be mse, mae or huber");
            }
          },
          [](const Config& c) { return forest::to_string(c.train.config.objective.kind); }},
      DDF_DOUBLE("train.huber_delta", train.config.objective.huber_delta),
      Key{"train.loss_composition",
          [](Config& c, const std::string& k, const std::string& v) {
            try {
              c.train.config.objective.composition = forest::parse_loss_composition(v);
            } catch (const ArgumentError&) {
              throw ConfigError("config: '" + k + "' must be ensemble or per_tree");
            }
          },
          [](const Config& c) { return forest::to_string(c.train.config.objective.composition); }},
      DDF_DOUBLE("train.l1", train.config.objective.l1),
      Key{"train.max_rows",
          [](Config& c, const std::string& k, const std::string& v) {
            c.train.max_rows = static_cast<std::size_t>(to_u64(k, v));
          },
          [](const Config& c) { return std::to_string(c.train.max_rows); }},
      DDF_BOOL("train.amplitude_scaling", train.encoding.amplitude_scaling),
      Key{"train.target",
          [](Config& c, const std::string& k, const std::string& v) {
            if (v == "value") {
              c.train.encoding.increment = false;
            } else if (v == "increment") {
              c.train.encoding.increment = true;
            } else {
              throw ConfigError("config: '" + k + "' must be value or increment");
            }
          },
          [](const Config& c) { return std::string(c.train.encoding.increment ? "increment" : "value"); }},
      Key{"ddf.model", [](Config& c, const std::string&, const std::string& v) { c.ddf.model = v; },
          [](const Config& c) { return c.ddf.model; }},
      Key{"ddf.clamp",
          [](Config& c, const std::string& k, const std::string& v) {
            if (v != "auto" && v != "off" && !(to_double(k, v) > 0.0)) {
              throw ConfigError("config: '" + k + "' must be auto, off or positive");
            }
            c.ddf.clamp = v;
          },
          [](const Config& c) { return c.ddf.clamp; }},
      DDF_DOUBLE("ddf.clamp_factor", ddf.clamp_factor),
      DDF_INT("reference.margin", reference.margin),
      DDF_DOUBLE("reference.memory_cap_mb", reference.memory_cap_mb),
      Key{"compare.schemes",
          [](Config& c, const std::string& k, const std::string& v) {
            std::vector<std::string> out;
            std::stringstream ss(v);
            std::string item;
            while (std::getline(ss, item, ',')) {
              item = trim(item);
              if (item != "pec" && item != "cpml" && item != "ddf") {
                throw ConfigError("config: '" + k + "' lists unknown scheme '" + item + "'");
              }
              out.push_back(item);
            }
            if (out.empty()) throw ConfigError("config: '" + k + "' is empty");
            c.schemes = out;
          },
          [](const Config& c) {
            std::string s;
            for (const auto& x : c.schemes) s += (s.empty() ? "" : ",") + x;
            return s;
          }},
  };
  return table;
}

#undef DDF_DOUBLE
#undef DDF_INT
#undef DDF_I64
#undef DDF_U64
#undef DDF_BOOL

const Key* find_key(const std::string& name) {
  for (const auto& k : keys()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

bool is_extra(const std::string& key) { return key.rfind("tool.", 0) == 0 || key.rfind("hash.", 0) == 0; }

}  // namespace

void Config::validate() const {
  try {
    scene.validate();
    pml.validate();
    stencil.validate();
    forest::ForestShape{train.n_trees, train.depth, stencil.feature_count()}.validate();
    train.config.validate();
  } catch (const ArgumentError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (data.scenarios < 1) throw ConfigError("config: dataset.scenarios must be >= 1");
  if (data.step_stride < 1) throw ConfigError("config: dataset.step_stride must be >= 1");
  const auto& r = data.split;
  if (!(r.train > 0 && r.valid > 0 && r.test > 0) || std::abs(r.train + r.valid + r.test - 1.0) > 1e-9) {
    throw ConfigError("config: split ratios must be positive and sum to 1");
  }
  if (!(ddf.clamp_factor > 0)) throw ConfigError("config: ddf.clamp_factor must be positive");
  if (reference.margin < 0) throw ConfigError("config: reference.margin must be >= 0");
  if (!(reference.memory_cap_mb > 0)) throw ConfigError("config: reference.memory_cap_mb must be positive");
}

KeyValues parse_config_text(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(number) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(number) + ": empty key");
    if (!is_extra(key) && find_key(key) == nullptr) {
      throw ConfigError("config line " + std::to_string(number) + ": unknown key '" + key + "'");
    }
    if (!kv.emplace(key, value).second) {
      throw ConfigError("config line " + std::to_string(number) + ": duplicate key '" + key + "'");
    }
  }
  return kv;
}

void set_option(Config& config, const std::string& key, const std::string& value) {
  const Key* k = find_key(key);
  if (k == nullptr) throw ConfigError("config: unknown key '" + key + "'");
  k->set(config, key, value);
}

Config config_from(const KeyValues& kv, KeyValues* extras) {
  Config c;
  // The optimizer choice resets its moment defaults, so it goes first.
  if (auto it = kv.find("train.optimizer"); it != kv.end()) set_option(c, it->first, it->second);
  for (const auto& [key, value] : kv) {
    if (key == "train.optimizer") continue;
    if (is_extra(key)) {
      if (extras != nullptr) (*extras)[key] = value;
      continue;
    }
    set_option(c, key, value);
  }
  c.validate();
  return c;
}

Config load_config(const std::filesystem::path& path, KeyValues* extras) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return config_from(parse_config_text(text.str()), extras);
}

KeyValues to_key_values(const Config& config) {
  KeyValues kv;
  for (const auto& k : keys()) kv[k.name] = k.get(config);
  return kv;
}

std::vector<std::string> known_keys() {
  std::vector<std::string> out;
  for (const auto& k : keys()) out.push_back(k.name);
  std::sort(out.begin(), out.end());
  return out;
}

std::string file_hash(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

KeyValues RunManifest::to_key_values() const {
  KeyValues kv = harness::to_key_values(config);
  kv["tool.name"] = tool;
  kv["tool.version"] = version;
  for (const auto& p : inputs) kv["hash." + p.string()] = file_hash(p);
  return kv;
}

void RunManifest::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  for (const auto& [k, v] : to_key_values()) out << k << " = " << v << "\n";
  if (!out) throw ConfigError("cannot write manifest " + path.string());
}

void verify_hashes(const KeyValues& extras) {
  for (const auto& [key, value] : extras) {
    if (key.rfind("hash.", 0) != 0) continue;
    const std::string file = key.substr(5);
    if (file_hash(file) != value) throw ConfigError("manifest: " + file + " has changed since the recorded run");
  }
}

}  // namespace ddfabc::harness
