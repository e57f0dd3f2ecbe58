// ddfabc: reference, teacher, dataset, train, eval and compare in one binary.
// Exit codes: 0 ok, 2 configuration error, 3 numerical instability, 1 other.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ddfabc/dataset/extract.hpp"
#include "ddfabc/errors.hpp"
#include "ddfabc/forest/model_io.hpp"
#include "ddfabc/harness/config.hpp"
#include "ddfabc/harness/pipeline.hpp"
#include "ddfabc/harness/reference.hpp"
#include "ddfabc/version.hpp"

namespace fs = std::filesystem;
using namespace ddfabc;

namespace {

struct Common {
  std::string config;
  std::vector<std::string> sets;
  std::string manifest;
  bool verbose = false;
};

harness::Config resolve(const Common& c) {
  KeyValues extras;
  harness::Config cfg = c.config.empty() ? harness::Config{} : harness::load_config(c.config, &extras);
  harness::verify_hashes(extras);
  for (const auto& s : c.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
    harness::set_option(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

void write_manifest(const Common& c, const harness::Config& cfg, std::vector<fs::path> inputs) {
  if (c.manifest.empty()) return;
  harness::RunManifest m{cfg, "ddfabc", version(), std::move(inputs)};
  m.write(c.manifest);
}

void save_probe(const std::string& path, const fdtd::ProbeRecord& rec) {
  if (path.empty()) {
    fdtd::write_probe_csv(std::cout, rec);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  fdtd::write_probe_csv(out, rec);
  if (!out) throw ConfigError("cannot write " + path);
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("-c,--config", c.config, "key = value configuration file");
  app->add_option("-s,--set", c.sets, "override one key, key=value (repeatable)");
  app->add_option("-m,--manifest", c.manifest, "write the resolved run manifest here");
  app->add_flag("-v,--verbose", c.verbose, "progress and diagnostics on stderr");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<fs::path> model_files(const std::string& model) {
  return {model, abc::corner_path(model), abc::meta_path(model)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learned one-cell absorbing boundary for 2D FDTD"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  Common common;
  std::string out;
  std::string data;
  std::string scheme = "cpml";
  bool csv = false;

  auto* keys = app.add_subcommand("keys", "list every configuration key with its default");

  auto* reference = app.add_subcommand("reference", "oversized PEC-walled run, probe CSV");
  add_common(reference, common);
  reference->add_option("-o,--out", out, "probe CSV (stdout when omitted)");

  auto* teacher = app.add_subcommand("teacher", "CPML teacher run on the learned boundary's domain, probe CSV");
  add_common(teacher, common);
  teacher->add_option("-o,--out", out, "probe CSV (stdout when omitted)");

  auto* dataset_cmd = app.add_subcommand("dataset", "extract training samples from teacher runs");
  add_common(dataset_cmd, common);
  dataset_cmd->add_option("-o,--out", out, "edge dataset; corner rows go to <out>.corner")->required();
  dataset_cmd->add_flag("--csv", csv, "also write <out>.csv and <out>.corner.csv");

  auto* train = app.add_subcommand("train", "train the edge and corner forests");
  add_common(train, common);
  train->add_option("-d,--data", data, "edge dataset from `dataset`; <data>.corner beside it")->required();
  train->add_option("-o,--out", out, "model path; writes <out>, <out>.corner, <out>.meta")->required();

  auto* eval = app.add_subcommand("eval", "one scheme against the reference");
  add_common(eval, common);
  eval->add_option("--scheme", scheme, "pec, cpml or ddf")->check(CLI::IsMember({"pec", "cpml", "ddf"}));
  eval->add_option("-o,--out", out, "probe CSV of the scheme");

  auto* compare = app.add_subcommand("compare", "all configured schemes against one reference");
  add_common(compare, common);
  compare->add_option("-o,--out", out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (keys->parsed()) {
      for (const auto& [k, v] : harness::to_key_values(harness::Config{})) std::cout << k << " = " << v << "\n";
      return 0;
    }
    const harness::Config cfg = resolve(common);

    if (reference->parsed()) {
      const auto rec = harness::reference_run(cfg.scene, cfg.reference);
      save_probe(out, rec);
      write_manifest(common, cfg, {});
      if (common.verbose) std::fprintf(stderr, "reference: %lld steps in %.1f s\n", (long long)rec.steps(), seconds_since(t0));
    } else if (teacher->parsed()) {
      const auto run = dataset::run_teacher(cfg.scene, cfg.pml, cfg.stencil);
      save_probe(out, run.probe);
      write_manifest(common, cfg, {});
    } else if (dataset_cmd->parsed()) {
      const auto samples = harness::extract(cfg);
      dataset::save_dataset(out, samples.edge);
      dataset::save_dataset(out + ".corner", samples.corner);
      if (csv) {
        std::ofstream e(out + ".csv"), c(out + ".corner.csv");
        dataset::write_csv(e, samples.edge);
        dataset::write_csv(c, samples.corner);
      }
      write_manifest(common, cfg, {});
      std::fprintf(stderr, "dataset: %zu edge rows, %zu corner rows, M = %d (%.1f s)\n", samples.edge.rows(),
                   samples.corner.rows(), samples.edge.n_features, seconds_since(t0));
    } else if (train->parsed()) {
      const auto edge = dataset::load_dataset(data);
      const auto corner = dataset::load_dataset(data + ".corner");
      harness::Config run_cfg = cfg;
      if (common.verbose) {
        run_cfg.train.config.on_epoch = [&](int epoch, double tl, double vl) {
          std::fprintf(stderr, "epoch %4d  train %.4e  valid %.4e  (%.1f s)\n", epoch, tl, vl, seconds_since(t0));
        };
      }
      const auto trained = harness::train_model(run_cfg, edge, corner);
      abc::save_ddf_model(out, trained.model);
      write_manifest(common, cfg, {data, data + ".corner"});
      std::fprintf(stderr, "train: edge best epoch %d test nmse %.3e, corner best epoch %d test nmse %.3e (%.1f s)\n",
                   trained.edge.best_epoch, trained.edge_test_nmse, trained.corner.best_epoch,
                   trained.corner_test_nmse, seconds_since(t0));
    } else if (eval->parsed()) {
      std::optional<abc::DdfModel> model;
      if (scheme == "ddf") model = harness::load_configured_model(cfg);
      const auto cmp = harness::compare(cfg, {scheme}, model ? &*model : nullptr);
      if (!out.empty()) save_probe(out, cmp.runs.front().probe);
      harness::write_summary(std::cout, cmp);
      write_manifest(common, cfg, model ? model_files(cfg.ddf.model) : std::vector<fs::path>{});
    } else if (compare->parsed()) {
      std::optional<abc::DdfModel> model;
      for (const auto& s : cfg.schemes) {
        if (s == "ddf" && !model) model = harness::load_configured_model(cfg);
      }
      const auto cmp = harness::compare(cfg, cfg.schemes, model ? &*model : nullptr);
      fs::create_directories(out);
      const fs::path dir = out;
      {
        std::ofstream f(dir / "comparison.csv", std::ios::binary);
        harness::write_comparison_csv(f, cmp);
      }
      {
        std::ofstream f(dir / "comparison.svg", std::ios::binary);
        harness::write_comparison_svg(f, cmp);
      }
      {
        std::ofstream f(dir / "summary.txt", std::ios::binary);
        harness::write_summary(f, cmp);
      }
      save_probe((dir / "probe_reference.csv").string(), cmp.reference);
      for (const auto& run : cmp.runs) save_probe((dir / ("probe_" + run.scheme + ".csv")).string(), run.probe);
      harness::RunManifest m{cfg, "ddfabc", version(), model ? model_files(cfg.ddf.model) : std::vector<fs::path>{}};
      m.write(common.manifest.empty() ? dir / "manifest.txt" : fs::path(common.manifest));
      harness::write_summary(std::cout, cmp);
    }
    if (common.verbose) std::fprintf(stderr, "done in %.1f s\n", seconds_since(t0));
    return 0;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const FormatError& e) {
    std::fprintf(stderr, "bad file: %s\n", e.what());
    return 2;
  } catch (const ArgumentError& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return 2;
  } catch (const InstabilityError& e) {
    std::fprintf(stderr, "numerical instability at step %lld: %s\n", static_cast<long long>(e.step()), e.what());
    return 3;
  } catch (const TrainingDivergedError& e) {
    std::fprintf(stderr, "training diverged: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
