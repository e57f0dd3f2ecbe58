#include "ddfabc/version.hpp"

namespace ddfabc {

const char* version() { return DDFABC_VERSION; }

}  // namespace ddfabc
