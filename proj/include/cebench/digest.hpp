#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "cebench/bytes.hpp"

namespace cebench {

/// Project-wide content digest: SHA-256.
using Digest256 = std::array<std::uint8_t, 32>;

Digest256 sha256(BytesView data);
std::string digest_hex(const Digest256& d);
Digest256 digest_from_hex(std::string_view hex);

} // namespace cebench
