#include "ddfabc/abc/ddf_boundary.hpp"

#include <cmath>
#include <string>

#include "ddfabc/errors.hpp"

namespace ddfabc::abc {

double stability_guard(double value, double clamp, std::int64_t& triggered) {
  if (value > clamp) {
    ++triggered;
    return clamp;
  }
  if (value < -clamp) {
    ++triggered;
    return -clamp;
  }
  return value;
}

double default_clamp(double max_abs_field, double factor) {
  if (!(max_abs_field > 0.0) || !std::isfinite(max_abs_field)) return 1.0;
  return factor * max_abs_field;
}

ForestRingModel::ForestRingModel(const forest::Forest& edge, const forest::Forest& corner,
                                 const dataset::StencilSpec& stencil, const dataset::TargetEncoding& encoding)
    : edge_(edge),
      corner_(corner),
      n_features_(edge.n_features()),
      encoding_(encoding),
      self_(stencil.self_index()),
      buffer_(static_cast<std::size_t>(edge.n_features())) {
  if (corner.n_features() != edge.n_features()) {
    throw ConfigError("ddf: edge and corner models have different feature counts");
  }
  if (encoding_.increment && (self_ < 0 || self_ >= n_features_)) {
    throw ConfigError("ddf: increment encoding needs Ey in the stencil");
  }
}

double ForestRingModel::predict(std::size_t, const dataset::RingEdge& edge, std::int64_t,
                                std::span<const double> features) {
  forest::Predictor& f = edge.corner ? corner_ : edge_;
  const double base = encoding_.increment ? features[static_cast<std::size_t>(self_)] : 0.0;
  if (!encoding_.amplitude_scaling) return base + f(features);
  const double s = dataset::row_scale(features);
  if (s == 0.0) return 0.0;
  for (std::size_t i = 0; i < buffer_.size(); ++i) buffer_[i] = features[i] / s;
  return base + s * f(buffer_);
}

ReplayRingModel::ReplayRingModel(std::vector<std::vector<double>> values, int n_features)
    : values_(std::move(values)), n_features_(n_features) {}

double ReplayRingModel::predict(std::size_t slot, const dataset::RingEdge&, std::int64_t step,
                                std::span<const double>) {
  if (step < 0 || static_cast<std::size_t>(step) >= values_.size() || slot >= values_[step].size()) {
    throw ArgumentError("replay: no recorded value for step " + std::to_string(step));
  }
  return values_[static_cast<std::size_t>(step)][slot];
}

DdfBoundary::DdfBoundary(RingModel& model, dataset::StencilSpec stencil, std::optional<double> clamp)
    : model_(&model), stencil_(std::move(stencil)), clamp_(clamp) {
  stencil_.validate();
  if (model.n_features() != stencil_.feature_count()) {
    throw ConfigError("ddf: model expects " + std::to_string(model.n_features()) + " features, stencil gives " +
                      std::to_string(stencil_.feature_count()));
  }
  if (clamp_ && !(*clamp_ > 0.0)) throw ConfigError("ddf: clamp must be positive");
}

void DdfBoundary::reset(const fdtd::FieldGrid& grid, const fdtd::GridSpec&) {
  ring_ = dataset::ring_edges(grid.nx(), grid.ny(), stencil_);
  history_ = fdtd::FieldGrid(grid.nx(), grid.ny());
  row_.assign(static_cast<std::size_t>(stencil_.feature_count()), 0.0);
  predictions_.assign(ring_.size(), 0.0);
  clamp_count_ = 0;
  max_abs_prediction_ = 0.0;
}

void DdfBoundary::apply(fdtd::FieldGrid& grid, std::int64_t step) {
  if (grid.nx() != history_.nx() || grid.ny() != history_.ny()) throw ArgumentError("ddf: apply before reset");
  // Every prediction reads the ring as it stood before this step.
  for (std::size_t s = 0; s < ring_.size(); ++s) {
    const auto& e = ring_[s];
    dataset::assemble_features(grid, history_, e, stencil_, row_);
    double v = model_->predict(s, e, step, row_);
    if (!std::isfinite(v)) {
      throw InstabilityError("ddf: non-finite prediction on " + dataset::to_string(e.side) + " edge " +
                                 std::to_string(e.index) + " at step " + std::to_string(step),
                             step);
    }
    if (std::abs(v) > max_abs_prediction_) max_abs_prediction_ = std::abs(v);
    if (clamp_) v = stability_guard(v, *clamp_, clamp_count_);
    predictions_[s] = dataset::target_sign(e.side) * v;
  }
  dataset::copy_band(grid, history_, stencil_);
  for (std::size_t s = 0; s < ring_.size(); ++s) dataset::ring_value(grid, ring_[s]) = predictions_[s];
}

}  // namespace ddfabc::abc
