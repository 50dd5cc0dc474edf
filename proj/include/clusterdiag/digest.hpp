#pragma once

#include <string>
#include <string_view>

namespace clusterdiag {

/// Hex SHA-256 of the given bytes; used to pin reports to their input file.
std::string sha256_hex(std::string_view bytes);

}  // namespace clusterdiag
