#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "ddfabc/forest/forest.hpp"

namespace ddfabc::forest {

inline constexpr std::string_view kModelMagic = "DDFABC01";

/// Little-endian, no padding:
///   "DDFABC01" | u32 K | u32 d | u32 M | u32 loss code
///   | M x (f64 mean, f64 std)
///   | per tree: (2^d - 1) x (M f64 weights, f64 threshold), 2^d f64 leaves
void write_model(std::ostream& out, const Forest& forest);

/// Throws FormatError on bad magic, truncation or an implausible header.
Forest read_model(std::istream& in);

void save_model(const std::filesystem::path& path, const Forest& forest);
Forest load_model(const std::filesystem::path& path);

}  // namespace ddfabc::forest
