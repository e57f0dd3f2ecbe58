#pragma once

#include <vector>

#include "ddfabc/fdtd/grid.hpp"

namespace ddfabc::fdtd {

/// Horizontal PEC strip. With thickness 0 it is an infinitely thin sheet on
/// grid line j_row covering ex(i, j_row) for i_start <= i < i_end. A positive
/// thickness fills the cells j_row <= j < j_row + thickness, zeroing every
/// edge that touches them.
struct PecSheet {
  int j_row = 0;
  int i_start = 0;
  int i_end = 100;
  int thickness = 0;
};

/// Per-edge PEC flags for the E components.
class PecMask {
 public:
  PecMask() = default;
  PecMask(int nx, int ny);

  void add(const PecSheet& sheet);

  bool ex(int i, int j) const { return ex_[static_cast<std::size_t>(i) * (ny_ + 1) + j] != 0; }
  bool ey(int i, int j) const { return ey_[static_cast<std::size_t>(i) * ny_ + j] != 0; }
  bool empty() const { return count_ == 0; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }

  /// Zero every masked E entry.
  void apply(FieldGrid& grid) const;

 private:
  int nx_ = 0;
  int ny_ = 0;
  int count_ = 0;
  std::vector<std::size_t> ex_masked_;
  std::vector<std::size_t> ey_masked_;
  std::vector<unsigned char> ex_;
  std::vector<unsigned char> ey_;
};

}  // namespace ddfabc::fdtd
