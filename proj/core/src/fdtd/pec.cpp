#include "ddfabc/fdtd/pec.hpp"

#include "ddfabc/errors.hpp"

namespace ddfabc::fdtd {

PecMask::PecMask(int nx, int ny)
    : nx_(nx),
      ny_(ny),
      ex_(static_cast<std::size_t>(nx) * (ny + 1), 0),
      ey_(static_cast<std::size_t>(nx + 1) * ny, 0) {}

void PecMask::add(const PecSheet& sheet) {
  if (sheet.i_start < 0 || sheet.i_end > nx_ || sheet.i_start >= sheet.i_end || sheet.thickness < 0 ||
      sheet.j_row < 0 || sheet.j_row + sheet.thickness > ny_) {
    throw ArgumentError("pec: sheet does not fit the grid");
  }
  auto mark_ex = [&](int i, int j) {
    const std::size_t k = static_cast<std::size_t>(i) * (ny_ + 1) + j;
    if (ex_[k] == 0) {
      ex_[k] = 1;
      ex_masked_.push_back(k);
      ++count_;
    }
  };
  auto mark_ey = [&](int i, int j) {
    const std::size_t k = static_cast<std::size_t>(i) * ny_ + j;
    if (ey_[k] == 0) {
      ey_[k] = 1;
      ey_masked_.push_back(k);
      ++count_;
    }
  };
  for (int j = sheet.j_row; j <= sheet.j_row + sheet.thickness; ++j) {
    for (int i = sheet.i_start; i < sheet.i_end; ++i) mark_ex(i, j);
  }
  for (int j = sheet.j_row; j < sheet.j_row + sheet.thickness; ++j) {
    for (int i = sheet.i_start; i <= sheet.i_end; ++i) mark_ey(i, j);
  }
}

void PecMask::apply(FieldGrid& grid) const {
  auto& ex = grid.ex.data();
  auto& ey = grid.ey.data();
  for (std::size_t k : ex_masked_) ex[k] = 0.0;
  for (std::size_t k : ey_masked_) ey[k] = 0.0;
}

}  // namespace ddfabc::fdtd
