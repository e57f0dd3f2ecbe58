#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace ddfabc::fdtd {

/// Largest stable explicit time step of the 2D Yee scheme,
/// 1 / (c * sqrt(1/dx^2 + 1/dy^2)). Throws ArgumentError on dx <= 0 or dy <= 0.
double courant_limit(double dx, double dy);

struct GridSpec {
  int nx = 0;
  int ny = 0;
  double dx = 1e-3;
  double dy = 1e-3;
  double dt = 0.0;
  std::int64_t n_steps = 1500;

  /// Throws ArgumentError when the spec is unusable or violates the Courant
  /// limit.
  void validate() const;

  std::int64_t cell_count() const {
    return static_cast<std::int64_t>(nx) * ny;
  }
};

/// Dense 2D array indexed (i, j) with i the x index. Storage is i-major.
class Array2D {
 public:
  Array2D() = default;
  Array2D(int ni, int nj) : ni_(ni), nj_(nj), data_(static_cast<std::size_t>(ni) * nj, 0.0) {}

  int ni() const { return ni_; }
  int nj() const { return nj_; }

  double& operator()(int i, int j) { return data_[index(i, j)]; }
  double operator()(int i, int j) const { return data_[index(i, j)]; }

  bool contains(int i, int j) const { return i >= 0 && i < ni_ && j >= 0 && j < nj_; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  void fill(double v);

  bool operator==(const Array2D&) const = default;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(nj_) + static_cast<std::size_t>(j);
  }

  int ni_ = 0;
  int nj_ = 0;
  std::vector<double> data_;
};

/// TEz Yee field set on an nx x ny cell grid.
///   ex(i, j): x-directed edge from (i, j) to (i+1, j); nx x (ny+1)
///   ey(i, j): y-directed edge from (i, j) to (i, j+1); (nx+1) x ny
///   hz(i, j): cell center (i+1/2, j+1/2);              nx x ny
/// Edges on the outer boundary (ey at i = 0 or nx, ex at j = 0 or ny) are
/// owned by the boundary handler; the interior update never writes them.
struct FieldGrid {
  FieldGrid() = default;
  FieldGrid(int nx, int ny) : ex(nx, ny + 1), ey(nx + 1, ny), hz(nx, ny) {}

  int nx() const { return hz.ni(); }
  int ny() const { return hz.nj(); }

  void clear();
  bool all_finite() const;
  double max_abs() const;

  bool operator==(const FieldGrid&) const = default;

  Array2D ex;
  Array2D ey;
  Array2D hz;
};

}  // namespace ddfabc::fdtd
