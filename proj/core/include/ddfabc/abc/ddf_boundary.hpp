#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ddfabc/dataset/sample_set.hpp"
#include "ddfabc/dataset/stencil.hpp"
#include "ddfabc/fdtd/simulation.hpp"
#include "ddfabc/forest/forest.hpp"

namespace ddfabc::abc {

/// Saturates `value` to [-clamp, clamp], bumping `triggered` when it does.
double stability_guard(double value, double clamp, std::int64_t& triggered);

/// Default guard level: factor x the largest |field| in the teacher data,
/// or 1.0 when that data was all zero.
double default_clamp(double max_abs_field, double factor = 10.0);

/// Source of ring values. `slot` indexes ring_edges() order.
class RingModel {
 public:
  virtual ~RingModel() = default;
  virtual int n_features() const = 0;
  virtual double predict(std::size_t slot, const dataset::RingEdge& edge, std::int64_t step,
                         std::span<const double> features) = 0;
};

/// Edge and corner forests whose outputs are decoded per `encoding`.
class ForestRingModel final : public RingModel {
 public:
  ForestRingModel(const forest::Forest& edge, const forest::Forest& corner, const dataset::StencilSpec& stencil,
                  const dataset::TargetEncoding& encoding = {});
  int n_features() const override { return n_features_; }
  double predict(std::size_t slot, const dataset::RingEdge& edge, std::int64_t step,
                 std::span<const double> features) override;

 private:
  forest::Predictor edge_;
  forest::Predictor corner_;
  int n_features_;
  dataset::TargetEncoding encoding_;
  int self_;
  std::vector<double> buffer_;
};

/// Plays back recorded ring values, ignoring the features.
class ReplayRingModel final : public RingModel {
 public:
  ReplayRingModel(std::vector<std::vector<double>> values, int n_features);
  int n_features() const override { return n_features_; }
  double predict(std::size_t slot, const dataset::RingEdge& edge, std::int64_t step,
                 std::span<const double> features) override;

 private:
  std::vector<std::vector<double>> values_;
  int n_features_;
};

/// One-cell learned boundary. Each step, every outer-ring tangential E is
/// replaced by the model's prediction from the current fields and the
/// previous step's stencil band. History starts at zero.
class DdfBoundary final : public fdtd::BoundaryHandler {
 public:
  /// Throws ConfigError when the model width differs from the stencil's M.
  /// No clamp disables the guard.
  DdfBoundary(RingModel& model, dataset::StencilSpec stencil, std::optional<double> clamp);

  void reset(const fdtd::FieldGrid& grid, const fdtd::GridSpec& spec) override;
  /// Throws InstabilityError on a non-finite prediction.
  void apply(fdtd::FieldGrid& grid, std::int64_t step) override;
  std::string name() const override { return "ddf"; }

  std::int64_t clamp_count() const { return clamp_count_; }
  double max_abs_prediction() const { return max_abs_prediction_; }
  const std::vector<dataset::RingEdge>& ring() const { return ring_; }

 private:
  RingModel* model_;
  dataset::StencilSpec stencil_;
  std::optional<double> clamp_;
  std::vector<dataset::RingEdge> ring_;
  fdtd::FieldGrid history_;
  std::vector<double> row_;
  std::vector<double> predictions_;
  std::int64_t clamp_count_ = 0;
  double max_abs_prediction_ = 0.0;
};

}  // namespace ddfabc::abc
