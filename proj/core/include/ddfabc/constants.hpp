#pragma once

#include <numbers>

namespace ddfabc::phys {

inline constexpr double kC0 = 299792458.0;                        // m/s, exact
inline constexpr double kMu0 = 4.0e-7 * std::numbers::pi;         // H/m
inline constexpr double kEps0 = 1.0 / (kMu0 * kC0 * kC0);         // F/m
inline constexpr double kEta0 = kMu0 * kC0;                       // ohm

}  // namespace ddfabc::phys
