#include "ddfabc/abc/model.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ddfabc/errors.hpp"
#include "ddfabc/forest/model_io.hpp"

namespace ddfabc::abc {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const std::string& need(const KeyValues& kv, const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw ConfigError("model metadata: missing '" + key + "'");
  return it->second;
}

double to_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("model metadata: '" + key + "' is not a number");
  }
}

int to_int(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("model metadata: '" + key + "' is not an integer");
  }
}

}  // namespace

std::filesystem::path corner_path(const std::filesystem::path& model) {
  return std::filesystem::path(model.string() + ".corner");
}

std::filesystem::path meta_path(const std::filesystem::path& model) {
  return std::filesystem::path(model.string() + ".meta");
}

dataset::StencilSpec stencil_from(const KeyValues& kv, const std::string& prefix) {
  dataset::StencilSpec s;
  s.inward_depth = to_int(prefix + "inward_depth", need(kv, prefix + "inward_depth"));
  s.tangential_halfwidth = to_int(prefix + "tangential_halfwidth", need(kv, prefix + "tangential_halfwidth"));
  s.components = dataset::StencilSpec::parse_components(need(kv, prefix + "components"));
  s.time_levels = to_int(prefix + "time_levels", need(kv, prefix + "time_levels"));
  s.validate();
  if (auto it = kv.find(prefix + "m"); it != kv.end() && to_int(prefix + "m", it->second) != s.feature_count()) {
    throw ConfigError("model metadata: " + prefix + "m disagrees with the stencil");
  }
  return s;
}

void stencil_to(const dataset::StencilSpec& stencil, KeyValues& kv, const std::string& prefix) {
  kv[prefix + "inward_depth"] = std::to_string(stencil.inward_depth);
  kv[prefix + "tangential_halfwidth"] = std::to_string(stencil.tangential_halfwidth);
  kv[prefix + "components"] = stencil.components_string();
  kv[prefix + "time_levels"] = std::to_string(stencil.time_levels);
  kv[prefix + "m"] = std::to_string(stencil.feature_count());
}

void save_ddf_model(const std::filesystem::path& path, const DdfModel& model) {
  forest::save_model(path, model.edge);
  forest::save_model(corner_path(path), model.corner);
  KeyValues kv = model.metadata;
  stencil_to(model.stencil, kv);
  kv["max_abs_field"] = fmt(model.max_abs_field);
  kv["clamp"] = model.clamp ? fmt(*model.clamp) : "off";
  model.encoding.store(kv);
  std::ofstream out(meta_path(path), std::ios::binary);
  out << format_key_values(kv);
  if (!out) throw FormatError("model: cannot write " + meta_path(path).string());
}

DdfModel load_ddf_model(const std::filesystem::path& path) {
  DdfModel m;
  m.edge = forest::load_model(path);
  m.corner = forest::load_model(corner_path(path));
  std::ifstream in(meta_path(path), std::ios::binary);
  if (!in) throw FormatError("model: cannot read " + meta_path(path).string());
  std::ostringstream text;
  text << in.rdbuf();
  m.metadata = parse_key_values(text.str(), "model");
  m.stencil = stencil_from(m.metadata);
  m.max_abs_field = to_double("max_abs_field", need(m.metadata, "max_abs_field"));
  const std::string& clamp = need(m.metadata, "clamp");
  if (clamp == "off") {
    m.clamp.reset();
  } else {
    m.clamp = to_double("clamp", clamp);
    if (!(*m.clamp > 0.0)) m.clamp = default_clamp(m.max_abs_field);
  }
  m.encoding = dataset::TargetEncoding::load(m.metadata);
  const int width = m.stencil.feature_count();
  if (m.edge.n_features() != width || m.corner.n_features() != width) {
    throw ConfigError("model: forest feature count does not match the stencil (" + std::to_string(width) + ")");
  }
  return m;
}

}  // namespace ddfabc::abc
