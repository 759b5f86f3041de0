#pragma once

#include <string>
#include <string_view>

namespace limeout {

// SHA-256 digest of the bytes, as 64 lowercase hex characters.
std::string sha256_hex(std::string_view bytes);

}  // namespace limeout
