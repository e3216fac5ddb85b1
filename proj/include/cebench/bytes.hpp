#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cebench {

using Bytes = std::vector<std::uint8_t>;
using BytesView = std::span<const std::uint8_t>;

inline BytesView as_view(const Bytes& b) {
    return BytesView(b.data(), b.size());
}

inline BytesView as_view(std::string_view s) {
    return BytesView(reinterpret_cast<const std::uint8_t*>(s.data()), s.size());
}

inline Bytes to_bytes(std::string_view s) {
    return Bytes(s.begin(), s.end());
}

std::string to_hex(BytesView data);
Bytes from_hex(std::string_view hex);

} // namespace cebench
