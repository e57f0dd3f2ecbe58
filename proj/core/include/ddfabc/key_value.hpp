#pragma once

#include <map>
#include <string>

namespace ddfabc {

using KeyValues = std::map<std::string, std::string>;

/// One `key=value` per line, keys sorted.
std::string format_key_values(const KeyValues& kv);

/// Inverse of format_key_values. Blank lines are skipped; a line without
/// '=' throws FormatError naming `what`.
KeyValues parse_key_values(const std::string& text, const std::string& what);

}  // namespace ddfabc
