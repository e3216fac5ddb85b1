#include "cebench/digest.hpp"

#include <sodium.h>

#include "cebench/errors.hpp"

namespace cebench {

std::string to_hex(BytesView data) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xF]);
    }
    return out;
}

static int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

Bytes from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) raise(errc::invalid_input, "odd-length hex string");
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = hex_nibble(hex[2 * i]);
        int lo = hex_nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) raise(errc::invalid_input, "non-hex character");
        out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    return out;
}

Digest256 sha256(BytesView data) {
    Digest256 out{};
    crypto_hash_sha256(out.data(), data.data(), data.size());
    return out;
}

std::string digest_hex(const Digest256& d) {
    return to_hex(BytesView(d.data(), d.size()));
}

Digest256 digest_from_hex(std::string_view hex) {
    Bytes raw = from_hex(hex);
    if (raw.size() != 32) raise(errc::invalid_input, "digest must be 32 bytes");
    Digest256 out{};
    std::copy(raw.begin(), raw.end(), out.begin());
    return out;
}

const char* to_string(errc code) {
    switch (code) {
    case errc::config: return "config error";
    case errc::io: return "io error";
    case errc::invalid_input: return "invalid input";
    case errc::out_of_range: return "out of range";
    case errc::key_contract: return "key contract violation";
    case errc::integrity: return "integrity error";
    case errc::authentication: return "authentication error";
    case errc::corruption: return "corruption error";
    case errc::incomplete_grid: return "incomplete grid";
    case errc::resume_mismatch: return "resume mismatch";
    case errc::schema: return "schema error";
    case errc::empty_input: return "empty input";
    }
    return "error";
}

} // namespace cebench
