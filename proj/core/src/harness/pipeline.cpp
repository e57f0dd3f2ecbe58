#include "ddfabc/harness/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <ostream>

#include "ddfabc/errors.hpp"
#include "ddfabc/harness/reference.hpp"

namespace ddfabc::harness {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

forest::TrainResult fit(const Config& config, const dataset::SampleSet& raw, double& test_nmse) {
  const dataset::SampleSet encoded =
      dataset::encode_targets(raw, config.stencil.self_index(), config.train.encoding);
  dataset::Split parts;
  try {
    parts = dataset::split(encoded, config.data.split, config.data.split_seed);
  } catch (const ArgumentError& e) {
    throw ConfigError(std::string("train: ") + e.what());
  }
  if (config.train.max_rows > 0 && parts.train.rows() > config.train.max_rows) {
    std::vector<std::size_t> keep(config.train.max_rows);
    for (std::size_t i = 0; i < keep.size(); ++i) keep[i] = i;
    parts.train = dataset::select_rows(parts.train, keep);
  }
  const forest::ForestShape shape{config.train.n_trees, config.train.depth, raw.n_features};
  forest::TrainResult result = forest::train(shape, parts.train.raw(), parts.valid.raw(), config.train.config);
  test_nmse = forest::normalized_mse(result.forest, parts.test.raw());
  return result;
}

}  // namespace

dataset::ExtractedSamples extract(const Config& config) {
  dataset::TeacherConfig tc;
  tc.scenarios = dataset::scenario_sweep(config.scene, config.data.scenarios, config.data.seed, config.data.jitter);
  tc.pml = config.pml;
  tc.stencil = config.stencil;
  tc.seed = config.data.seed;
  tc.step_stride = config.data.step_stride;
  tc.drop_silent_rows = config.data.drop_silent_rows;
  return dataset::extract_samples(tc);
}

std::optional<double> resolve_clamp(const DdfOptions& options, double max_abs_field, std::optional<double> stored) {
  if (options.clamp == "off") return std::nullopt;
  if (options.clamp == "auto") return stored ? stored : abc::default_clamp(max_abs_field, options.clamp_factor);
  const double v = std::stod(options.clamp);
  if (!(v > 0.0)) throw ConfigError("ddf.clamp must be positive");
  return v;
}

TrainedModel train_model(const Config& config, const dataset::SampleSet& edge, const dataset::SampleSet& corner) {
  for (const auto* set : {&edge, &corner}) {
    if (set->n_features != config.stencil.feature_count()) {
      throw ConfigError("train: dataset has " + std::to_string(set->n_features) + " features, stencil gives " +
                        std::to_string(config.stencil.feature_count()));
    }
  }
  TrainedModel out;
  out.edge = fit(config, edge, out.edge_test_nmse);
  out.corner = fit(config, corner, out.corner_test_nmse);
  abc::DdfModel& m = out.model;
  m.edge = out.edge.forest;
  m.corner = out.corner.forest;
  m.stencil = config.stencil;
  m.encoding = config.train.encoding;
  m.max_abs_field = std::max(edge.max_abs_value(), corner.max_abs_value());
  m.clamp = resolve_clamp(config.ddf, m.max_abs_field);
  for (const auto& [k, v] : edge.metadata) {
    if (k.rfind("teacher.", 0) == 0 || k.rfind("grid.", 0) == 0 || k.rfind("domain.", 0) == 0 ||
        k.rfind("scenario", 0) == 0 || k == "seed") {
      m.metadata["data." + k] = v;
    }
  }
  m.metadata["train.n_trees"] = std::to_string(config.train.n_trees);
  m.metadata["train.depth"] = std::to_string(config.train.depth);
  m.metadata["train.optimizer"] = forest::to_string(config.train.config.optimizer.kind);
  m.metadata["train.lr"] = fmt("%.17g", config.train.config.optimizer.learning_rate);
  m.metadata["train.seed"] = std::to_string(config.train.config.seed);
  m.metadata["train.edge_best_epoch"] = std::to_string(out.edge.best_epoch);
  m.metadata["train.corner_best_epoch"] = std::to_string(out.corner.best_epoch);
  m.metadata["train.edge_test_nmse"] = fmt("%.6e", out.edge_test_nmse);
  m.metadata["train.corner_test_nmse"] = fmt("%.6e", out.corner_test_nmse);
  return out;
}

abc::DdfModel load_configured_model(const Config& config) {
  if (config.ddf.model.empty()) throw ConfigError("ddf.model is not set");
  const std::filesystem::path path = config.ddf.model;
  for (const auto& p : {path, abc::corner_path(path), abc::meta_path(path)}) {
    if (!std::filesystem::exists(p)) throw ConfigError("model file not found: " + p.string());
  }
  abc::DdfModel m;
  try {
    m = abc::load_ddf_model(path);
  } catch (const FormatError& e) {
    throw ConfigError(std::string("cannot load model: ") + e.what());
  }
  if (!(m.stencil == config.stencil)) {
    throw ConfigError("model stencil (" + std::to_string(m.stencil.feature_count()) +
                      " features) differs from the configured stencil");
  }
  m.clamp = resolve_clamp(config.ddf, m.max_abs_field, m.clamp);
  return m;
}

SchemeRun run_scheme(const Config& config, const std::string& scheme, const abc::DdfModel* model) {
  if (scheme == "pec") return run_pec(config.scene);
  if (scheme == "cpml") return run_cpml(config.scene, config.pml);
  if (scheme == "ddf") {
    if (model == nullptr) throw ConfigError("ddf scheme needs a model");
    return run_ddf(config.scene, *model);
  }
  throw ConfigError("unknown scheme '" + scheme + "'");
}

Comparison compare(const Config& config, const std::vector<std::string>& schemes, const abc::DdfModel* model) {
  Comparison out;
  out.reference = reference_run(config.scene, config.reference);
  const std::string ref_id = "reference(margin=" + std::to_string(config.reference.margin) + ")";
  for (const auto& s : schemes) {
    out.runs.push_back(run_scheme(config, s, model));
    ReflectionReport r = reflection_error(out.runs.back().probe.ey.front(), out.reference.ey.front());
    r.test_id = s;
    r.reference_id = ref_id;
    r.probe = out.runs.back().probe_in_region;
    out.reports.push_back(std::move(r));
  }
  return out;
}

void write_comparison_csv(std::ostream& out, const Comparison& c) {
  out << "step,t_seconds";
  for (const auto& r : c.reports) out << ",rdb_" << r.test_id;
  out << "\n";
  const double dt = c.reference.dt;
  const std::size_t n = c.reports.empty() ? 0 : c.reports.front().r_db.size();
  char buf[64];
  for (std::size_t i = 0; i < n; ++i) {
    out << (i + 1);
    std::snprintf(buf, sizeof buf, ",%.16e", static_cast<double>(i + 1) * dt);
    out << buf;
    for (const auto& r : c.reports) {
      std::snprintf(buf, sizeof buf, ",%.6f", r.r_db[i]);
      out << buf;
    }
    out << "\n";
  }
}

void write_comparison_svg(std::ostream& out, const Comparison& c) {
  const double w = 800, h = 480, left = 70, right = 140, top = 30, bottom = 50;
  const double pw = w - left - right, ph = h - top - bottom;
  double lo = 0.0, hi = -1e300;
  std::size_t n = 0;
  for (const auto& r : c.reports) {
    n = std::max(n, r.r_db.size());
    for (double v : r.r_db) {
      if (v > kReflectionFloorDb) lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (hi < lo) hi = lo + 10;
  lo = std::floor(std::max(lo, -200.0) / 20.0) * 20.0;
  hi = std::ceil(hi / 20.0) * 20.0;
  if (hi <= lo) hi = lo + 20;
  auto x_of = [&](std::size_t i) { return left + pw * (n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0); };
  auto y_of = [&](double v) { return top + ph * (hi - std::clamp(v, lo, hi)) / (hi - lo); };
  static const char* colours[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  char buf[160];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (double v = lo; v <= hi + 1e-9; v += 20.0) {
    std::snprintf(buf, sizeof buf, "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#ddd\"/>", left, y_of(v),
                  left + pw, y_of(v));
    out << buf << "\n";
    std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\">%.0f</text>", left - 6, y_of(v) + 4, v);
    out << buf << "\n";
  }
  std::snprintf(buf, sizeof buf, "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" stroke=\"black\"/>",
                left, top, pw, ph);
  out << buf << "\n";
  std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">time step</text>", left + pw / 2,
                h - 12);
  out << buf << "\n";
  std::snprintf(buf, sizeof buf,
                "<text x=\"16\" y=\"%.1f\" text-anchor=\"middle\" transform=\"rotate(-90 16 %.1f)\">R (dB)</text>",
                top + ph / 2, top + ph / 2);
  out << buf << "\n";
  std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"start\">0</text>", left, top + ph + 16);
  out << buf << "\n";
  std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\">%zu</text>", left + pw, top + ph + 16, n);
  out << buf << "\n";
  for (std::size_t s = 0; s < c.reports.size(); ++s) {
    const auto& r = c.reports[s];
    const char* colour = colours[s % 6];
    out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1\" points=\"";
    const std::size_t stride = std::max<std::size_t>(1, r.r_db.size() / 2000);
    for (std::size_t i = 0; i < r.r_db.size(); i += stride) {
      std::snprintf(buf, sizeof buf, "%.1f,%.1f ", x_of(i), y_of(r.r_db[i]));
      out << buf;
    }
    out << "\"/>\n";
    const double ly = top + 16 + 18.0 * static_cast<double>(s);
    std::snprintf(buf, sizeof buf, "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"%s\" stroke-width=\"2\"/>",
                  left + pw + 10, ly - 4, left + pw + 30, ly - 4, colour);
    out << buf << "\n";
    std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\">%s %.1f dB</text>", left + pw + 34, ly, r.test_id.c_str(),
                  r.r_db_max);
    out << buf << "\n";
  }
  out << "</svg>\n";
}

void write_summary(std::ostream& out, const Comparison& c) {
  char buf[256];
  for (std::size_t s = 0; s < c.reports.size(); ++s) {
    const auto& r = c.reports[s];
    const auto& run = c.runs[s];
    std::snprintf(buf, sizeof buf, "%-5s r_db_max %8.2f dB  probe (%d,%d)  cells %lld", r.test_id.c_str(), r.r_db_max,
                  r.probe.i, r.probe.j, static_cast<long long>(run.cells));
    out << buf;
    if (run.scheme == "ddf") {
      std::snprintf(buf, sizeof buf, "  clamp triggers %lld  max |prediction| %.4g",
                    static_cast<long long>(run.clamp_count), run.max_abs_prediction);
      out << buf;
    }
    out << "\n";
  }
}

}  // namespace ddfabc::harness
