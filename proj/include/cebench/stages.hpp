#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cebench/bytes.hpp"

namespace cebench::stages {

enum class AlgorithmId {
    bzip2,
    gzip,
    lzma,
    zip_container,
    aes,
    fernet,
    xsalsa20,
};

enum class StageKind { compress, encrypt };

std::string to_string(AlgorithmId id);
std::optional<AlgorithmId> parse_algorithm_id(std::string_view s);

/// key_bytes == 0 means the stage takes no key material (compressors).
struct KeyRequirement {
    std::size_t key_bytes = 0;
    std::size_t nonce_bytes = 0;
    bool none() const { return key_bytes == 0; }
};

struct AlgorithmSpec {
    AlgorithmId id{};
    StageKind kind{};
    std::map<std::string, std::string> params;
    KeyRequirement key_requirement;
};

/// The default stage registry: bzip2, gzip, lzma, zip-container (compress)
/// and aes, fernet, xsalsa20 (encrypt), in that order.
const std::vector<AlgorithmSpec>& registry();
const AlgorithmSpec& algorithm(AlgorithmId id);

/// Secret key plus the seed from which per-trial nonces are derived.
/// Deliberately has no serializer: key material never reaches records,
/// logs or result files.
struct KeyMaterial {
    AlgorithmId algorithm{};
    Bytes key;
    Bytes nonce_seed;
};

KeyMaterial generate_key(const AlgorithmSpec& algorithm_spec, std::uint64_t seed);

/// Nonce for one trial: SHA-256(nonce_seed ‖ trial_index_le64) truncated to
/// the algorithm's nonce length. Exposed so tests can audit uniqueness.
Bytes derive_nonce(const KeyMaterial& key, std::uint64_t trial_index);

/// Apply one stage. Compressors must be called with key == nullptr,
/// encryptors with a matching key. Encrypted output embeds everything the
/// inverse needs beyond the key itself:
///   aes       -> nonce(12) ‖ ciphertext ‖ tag(16)      (AES-256-GCM)
///   xsalsa20  -> nonce(24) ‖ ciphertext ‖ tag(16)      (XSalsa20-Poly1305)
///   fernet    -> 0x80 ‖ timestamp(8,BE) ‖ iv(16) ‖ ciphertext ‖ hmac(32)
/// Compressed output is the standard container for the format (RFC 1952
/// gzip, bzip2 stream, .xz, single-member ZIP archive).
Bytes forward(const AlgorithmSpec& algorithm_spec, const KeyMaterial* key, BytesView input,
              std::uint64_t trial_index);

Bytes inverse(const AlgorithmSpec& algorithm_spec, const KeyMaterial* key, BytesView input);

namespace fernet {
/// The harness keeps fernet tokens in their raw binary layout; these codecs
/// produce/accept the base64url text form used by other fernet
/// implementations.
std::string to_standard_token(BytesView raw_token);
Bytes from_standard_token(std::string_view token);
} // namespace fernet

} // namespace cebench::stages
