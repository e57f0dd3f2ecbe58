#include "ddfabc/pml/cpml.hpp"

#include <algorithm>
#include <cmath>

#include "ddfabc/constants.hpp"
#include "ddfabc/errors.hpp"

namespace ddfabc::pml {

void PmlParams::validate() const {
  if (thickness < 1) throw ArgumentError("pml: thickness must be >= 1");
  if (order < 1.0) throw ArgumentError("pml: grading order must be >= 1");
  if (!(sigma_max_ratio > 0.0)) throw ArgumentError("pml: sigma_max_ratio must be > 0");
  if (!(kappa_max >= 1.0)) throw ArgumentError("pml: kappa_max must be >= 1");
  if (!(alpha >= 0.0)) throw ArgumentError("pml: alpha must be >= 0");
}

double sigma_max(const PmlParams& params, double cell) {
  return params.sigma_max_ratio * (params.order + 1.0) * 0.8 / (phys::kEta0 * cell);
}

GradedValues grade_profile(const PmlParams& params, double rho, double cell) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw ArgumentError("pml: depth fraction outside [0, 1]");
  const double w = std::pow(rho, params.order);
  return {sigma_max(params, cell) * w, 1.0 + (params.kappa_max - 1.0) * w, params.alpha};
}

ConvolutionCoeffs convolution_coeffs(const GradedValues& g, double dt) {
  ConvolutionCoeffs k;
  k.inv_kappa = 1.0 / g.kappa;
  k.b = std::exp(-(g.sigma / g.kappa + g.alpha) * dt / phys::kEps0);
  const double denom = g.sigma * g.kappa + g.kappa * g.kappa * g.alpha;
  k.c = denom > 0.0 ? g.sigma / denom * (k.b - 1.0) : 0.0;
  return k;
}

CpmlBoundary::CpmlBoundary(PmlParams params) : params_(params) { params_.validate(); }

CpmlBoundary::Slab CpmlBoundary::make_slab(int n_positions, double offset, int n_cells, double cell,
                                           int extent) const {
  const double depth = params_.thickness;
  Slab s;
  s.extent = extent;
  for (int p = 0; p < n_positions; ++p) {
    const double x = p + offset;
    double rho = 0.0;
    if (x < depth) rho = (depth - x) / depth;
    if (x > n_cells - depth) rho = std::max(rho, (x - (n_cells - depth)) / depth);
    // Wall edges (rho == 1 at integer offsets) are never updated.
    if (rho <= 0.0 || (offset == 0.0 && (p == 0 || p == n_positions - 1))) continue;
    s.lines.push_back(p);
    s.coeffs.push_back(convolution_coeffs(grade_profile(params_, std::min(rho, 1.0), cell), spec_.dt));
  }
  s.psi.assign(s.lines.size() * static_cast<std::size_t>(extent), 0.0);
  return s;
}

void CpmlBoundary::reset(const fdtd::FieldGrid& grid, const fdtd::GridSpec& spec) {
  spec_ = spec;
  const int nx = grid.nx();
  const int ny = grid.ny();
  if (2 * params_.thickness >= std::min(nx, ny)) throw ArgumentError("pml: layer thicker than half the grid");
  hz_x_ = make_slab(nx, 0.5, nx, spec.dx, ny);
  ey_x_ = make_slab(nx + 1, 0.0, nx, spec.dx, ny);
  hz_y_ = make_slab(ny, 0.5, ny, spec.dy, nx);
  ex_y_ = make_slab(ny + 1, 0.0, ny, spec.dy, nx);
}

void CpmlBoundary::after_h(fdtd::FieldGrid& grid, std::int64_t step) {
  const double ch = spec_.dt / phys::kMu0;
  const double rdx = 1.0 / spec_.dx;
  const double rdy = 1.0 / spec_.dy;
  double check = 0.0;
  for (std::size_t l = 0; l < hz_x_.lines.size(); ++l) {
    const int i = hz_x_.lines[l];
    const auto& k = hz_x_.coeffs[l];
    double* psi = &hz_x_.psi[l * hz_x_.extent];
    for (int j = 0; j < hz_x_.extent; ++j) {
      const double d = (grid.ey(i + 1, j) - grid.ey(i, j)) * rdx;
      psi[j] = k.b * psi[j] + k.c * d;
      grid.hz(i, j) -= ch * ((k.inv_kappa - 1.0) * d + psi[j]);
      check += psi[j];
    }
  }
  for (std::size_t l = 0; l < hz_y_.lines.size(); ++l) {
    const int j = hz_y_.lines[l];
    const auto& k = hz_y_.coeffs[l];
    double* psi = &hz_y_.psi[l * hz_y_.extent];
    for (int i = 0; i < hz_y_.extent; ++i) {
      const double d = (grid.ex(i, j + 1) - grid.ex(i, j)) * rdy;
      psi[i] = k.b * psi[i] + k.c * d;
      grid.hz(i, j) += ch * ((k.inv_kappa - 1.0) * d + psi[i]);
      check += psi[i];
    }
  }
  if (!std::isfinite(check)) throw InstabilityError("non-finite PML auxiliary (H)", step);
}

void CpmlBoundary::apply(fdtd::FieldGrid& grid, std::int64_t step) {
  const double ce = spec_.dt / phys::kEps0;
  const double rdx = 1.0 / spec_.dx;
  const double rdy = 1.0 / spec_.dy;
  double check = 0.0;
  for (std::size_t l = 0; l < ex_y_.lines.size(); ++l) {
    const int j = ex_y_.lines[l];
    const auto& k = ex_y_.coeffs[l];
    double* psi = &ex_y_.psi[l * ex_y_.extent];
    for (int i = 0; i < ex_y_.extent; ++i) {
      const double d = (grid.hz(i, j) - grid.hz(i, j - 1)) * rdy;
      psi[i] = k.b * psi[i] + k.c * d;
      grid.ex(i, j) += ce * ((k.inv_kappa - 1.0) * d + psi[i]);
      check += psi[i];
    }
  }
  for (std::size_t l = 0; l < ey_x_.lines.size(); ++l) {
    const int i = ey_x_.lines[l];
    const auto& k = ey_x_.coeffs[l];
    double* psi = &ey_x_.psi[l * ey_x_.extent];
    for (int j = 0; j < ey_x_.extent; ++j) {
      const double d = (grid.hz(i, j) - grid.hz(i - 1, j)) * rdx;
      psi[j] = k.b * psi[j] + k.c * d;
      grid.ey(i, j) -= ce * ((k.inv_kappa - 1.0) * d + psi[j]);
      check += psi[j];
    }
  }
  if (!std::isfinite(check)) throw InstabilityError("non-finite PML auxiliary (E)", step);
}

double CpmlBoundary::max_abs_psi() const {
  double m = 0.0;
  for (const Slab* s : {&hz_x_, &hz_y_, &ex_y_, &ey_x_}) {
    for (double v : s->psi) m = std::max(m, std::abs(v));
  }
  return m;
}

}  // namespace ddfabc::pml
