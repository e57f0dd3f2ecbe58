#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ddfabc/fdtd/source.hpp"

namespace ddfabc::harness {

inline constexpr double kReflectionFloorDb = -300.0;

struct ReflectionReport {
  std::vector<double> r_db;
  double r_db_max = kReflectionFloorDb;
  std::string test_id;
  std::string reference_id;
  fdtd::EdgeIndex probe{};
  std::int64_t n_steps = 0;
};

/// R_dB(t) = 20 log10(|test(t) - ref(t)| / max_t |ref(t)|), floored at
/// -300 dB. Throws ArgumentError on a length mismatch or an all-zero
/// reference.
ReflectionReport reflection_error(std::span<const double> test, std::span<const double> reference);

}  // namespace ddfabc::harness
