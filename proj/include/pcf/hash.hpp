#pragma once

#include <string>

namespace pcf {

// Lowercase hex SHA-256 digest.
std::string sha256_hex(const std::string& data);

}  // namespace pcf
