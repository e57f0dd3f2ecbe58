#pragma once

namespace ddfabc {

/// Library version, "major.minor.patch".
const char* version();

}  // namespace ddfabc
