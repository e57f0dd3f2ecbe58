#include "ddfabc/harness/reflection.hpp"

#include <algorithm>
#include <cmath>

#include "ddfabc/errors.hpp"

namespace ddfabc::harness {

ReflectionReport reflection_error(std::span<const double> test, std::span<const double> reference) {
  if (test.size() != reference.size()) throw ArgumentError("reflection_error: series lengths differ");
  double peak = 0.0;
  for (double v : reference) peak = std::max(peak, std::abs(v));
  if (!(peak > 0.0)) throw ArgumentError("reflection_error: reference is identically zero");

  ReflectionReport rep;
  rep.n_steps = static_cast<std::int64_t>(test.size());
  rep.r_db.reserve(test.size());
  for (std::size_t n = 0; n < test.size(); ++n) {
    const double diff = std::abs(test[n] - reference[n]);
    const double db = diff > 0.0 ? std::max(20.0 * std::log10(diff / peak), kReflectionFloorDb)
                                 : kReflectionFloorDb;
    rep.r_db.push_back(db);
    rep.r_db_max = std::max(rep.r_db_max, db);
  }
  return rep;
}

}  // namespace ddfabc::harness
