#pragma once

#include <cstdint>
#include <vector>

#include "ddfabc/fdtd/grid.hpp"
#include "ddfabc/fdtd/simulation.hpp"

namespace ddfabc::pml {

struct PmlParams {
  int thickness = 10;
  double order = 4.0;            // polynomial grading exponent m
  double sigma_max_ratio = 1.0;  // multiple of the 0.8 (m+1)/(eta0 dx) optimum
  double kappa_max = 1.0;
  double alpha = 0.0;            // S/m, constant across the layer

  void validate() const;
};

struct GradedValues {
  double sigma = 0.0;
  double kappa = 1.0;
  double alpha = 0.0;
};

/// sigma_max = sigma_max_ratio * (m + 1) * 0.8 / (eta0 * cell).
double sigma_max(const PmlParams& params, double cell);

/// Polynomial profile at depth fraction rho (0 at the interface, 1 at the
/// outer wall). Throws ArgumentError outside [0, 1].
GradedValues grade_profile(const PmlParams& params, double rho, double cell);

/// Recursive-convolution coefficients for one auxiliary variable:
/// psi <- b psi + c * derivative.
struct ConvolutionCoeffs {
  double b = 1.0;
  double c = 0.0;
  double inv_kappa = 1.0;
};

ConvolutionCoeffs convolution_coeffs(const GradedValues& g, double dt);

/// Unsplit convolutional PML on the outer `thickness` cells of every side,
/// backed by the PEC outer wall. One auxiliary array per (field, stretch
/// direction), stored only over the PML slabs; corners get both.
class CpmlBoundary final : public fdtd::BoundaryHandler {
 public:
  explicit CpmlBoundary(PmlParams params);

  void reset(const fdtd::FieldGrid& grid, const fdtd::GridSpec& spec) override;
  void after_h(fdtd::FieldGrid& grid, std::int64_t step) override;
  void apply(fdtd::FieldGrid& grid, std::int64_t step) override;
  std::string name() const override { return "cpml"; }

  const PmlParams& params() const { return params_; }

  /// Largest |psi| over all auxiliary arrays.
  double max_abs_psi() const;

 private:
  // Lines (columns for x, rows for y) carrying a non-trivial stretch.
  struct Slab {
    std::vector<int> lines;
    std::vector<ConvolutionCoeffs> coeffs;  // one per line
    std::vector<double> psi;                // lines.size() x extent
    int extent = 0;
  };

  Slab make_slab(int n_positions, double offset, int n_cells, double cell, int extent) const;

  PmlParams params_;
  fdtd::GridSpec spec_;
  Slab hz_x_;  // d(Ey)/dx at hz
  Slab hz_y_;  // d(Ex)/dy at hz
  Slab ex_y_;  // d(Hz)/dy at ex
  Slab ey_x_;  // d(Hz)/dx at ey
};

}  // namespace ddfabc::pml
