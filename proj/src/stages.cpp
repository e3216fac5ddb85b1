#include "cebench/stages.hpp"

#include <algorithm>
#include <cstring>

#include "cebench/digest.hpp"
#include "cebench/errors.hpp"
#include "cebench/rng.hpp"
#include "stage_impl.hpp"

namespace cebench::stages {

std::string to_string(AlgorithmId id) {
    switch (id) {
    case AlgorithmId::bzip2: return "bzip2";
    case AlgorithmId::gzip: return "gzip";
    case AlgorithmId::lzma: return "lzma";
    case AlgorithmId::zip_container: return "zip-container";
    case AlgorithmId::aes: return "aes";
    case AlgorithmId::fernet: return "fernet";
    case AlgorithmId::xsalsa20: return "xsalsa20";
    }
    return "unknown";
}

std::optional<AlgorithmId> parse_algorithm_id(std::string_view s) {
    if (s == "bzip2") return AlgorithmId::bzip2;
    if (s == "gzip") return AlgorithmId::gzip;
    if (s == "lzma") return AlgorithmId::lzma;
    if (s == "zip-container") return AlgorithmId::zip_container;
    if (s == "aes") return AlgorithmId::aes;
    if (s == "fernet") return AlgorithmId::fernet;
    if (s == "xsalsa20") return AlgorithmId::xsalsa20;
    return std::nullopt;
}

const std::vector<AlgorithmSpec>& registry() {
    static const std::vector<AlgorithmSpec> algorithms = {
        {AlgorithmId::bzip2, StageKind::compress, {{"level", "9"}}, {}},
        {AlgorithmId::gzip, StageKind::compress, {{"level", "6"}}, {}},
        {AlgorithmId::lzma, StageKind::compress, {{"preset", "6"}, {"check", "crc64"}}, {}},
        {AlgorithmId::zip_container,
         StageKind::compress,
         {{"method", "deflate"}, {"level", "6"}, {"member", "data"}},
         {}},
        {AlgorithmId::aes,
         StageKind::encrypt,
         {{"mode", "gcm"}, {"key_bits", "256"}},
         {32, 12}},
        {AlgorithmId::fernet,
         StageKind::encrypt,
         {{"construction", "aes128-cbc-hmac-sha256"}, {"token", "binary"}},
         {32, 16}},
        {AlgorithmId::xsalsa20,
         StageKind::encrypt,
         {{"cipher", "xsalsa20-poly1305"}},
         {32, 24}},
    };
    return algorithms;
}

const AlgorithmSpec& algorithm(AlgorithmId id) {
    for (const AlgorithmSpec& spec : registry()) {
        if (spec.id == id) return spec;
    }
    raise(errc::invalid_input, "algorithm not in registry");
}

KeyMaterial generate_key(const AlgorithmSpec& algorithm_spec, std::uint64_t seed) {
    if (algorithm_spec.kind != StageKind::encrypt) {
        raise(errc::key_contract,
              "cannot generate key material for " + to_string(algorithm_spec.id));
    }
    SplitMix64 rng(mix_seed(seed, 0x6B65795FULL ^ static_cast<std::uint64_t>(algorithm_spec.id)));
    auto fill = [&rng](Bytes& buf, std::size_t n) {
        buf.resize(n);
        for (std::size_t i = 0; i < n; i += 8) {
            std::uint64_t v = rng.next();
            std::memcpy(buf.data() + i, &v, std::min<std::size_t>(8, n - i));
        }
    };
    KeyMaterial key;
    key.algorithm = algorithm_spec.id;
    fill(key.key, algorithm_spec.key_requirement.key_bytes);
    fill(key.nonce_seed, algorithm_spec.key_requirement.nonce_bytes);
    return key;
}

Bytes derive_nonce(const KeyMaterial& key, std::uint64_t trial_index) {
    const AlgorithmSpec& spec = algorithm(key.algorithm);
    Bytes material(key.nonce_seed);
    for (int i = 0; i < 8; ++i) {
        material.push_back(static_cast<std::uint8_t>(trial_index >> (8 * i)));
    }
    Digest256 digest = sha256(as_view(material));
    return Bytes(digest.begin(), digest.begin() + spec.key_requirement.nonce_bytes);
}

namespace {

void check_key_contract(const AlgorithmSpec& spec, const KeyMaterial* key) {
    if (spec.kind == StageKind::compress) {
        if (key != nullptr) {
            raise(errc::key_contract, to_string(spec.id) + " takes no key material");
        }
        return;
    }
    if (key == nullptr) raise(errc::key_contract, to_string(spec.id) + " requires key material");
    if (key->algorithm != spec.id) {
        raise(errc::key_contract, "key material generated for " + to_string(key->algorithm) +
                                      " passed to " + to_string(spec.id));
    }
    if (key->key.size() != spec.key_requirement.key_bytes ||
        key->nonce_seed.size() != spec.key_requirement.nonce_bytes) {
        raise(errc::key_contract, "key material size mismatch for " + to_string(spec.id));
    }
}

int param_int(const AlgorithmSpec& spec, const char* name) {
    return std::stoi(spec.params.at(name));
}

} // namespace

Bytes forward(const AlgorithmSpec& algorithm_spec, const KeyMaterial* key, BytesView input,
              std::uint64_t trial_index) {
    check_key_contract(algorithm_spec, key);
    if (input.empty()) raise(errc::invalid_input, "forward on empty input");
    switch (algorithm_spec.id) {
    case AlgorithmId::bzip2: return impl::bzip2_compress(input, param_int(algorithm_spec, "level"));
    case AlgorithmId::gzip: return impl::gzip_compress(input, param_int(algorithm_spec, "level"));
    case AlgorithmId::lzma:
        return impl::xz_compress(input,
                                 static_cast<std::uint32_t>(param_int(algorithm_spec, "preset")));
    case AlgorithmId::zip_container:
        return impl::zip_compress(input, param_int(algorithm_spec, "level"));
    case AlgorithmId::aes:
        return impl::aes_gcm_encrypt(input, as_view(key->key),
                                     as_view(derive_nonce(*key, trial_index)));
    case AlgorithmId::fernet:
        return impl::fernet_encrypt(input, as_view(key->key),
                                    as_view(derive_nonce(*key, trial_index)));
    case AlgorithmId::xsalsa20:
        return impl::secretbox_encrypt(input, as_view(key->key),
                                       as_view(derive_nonce(*key, trial_index)));
    }
    raise(errc::invalid_input, "unknown algorithm");
}

Bytes inverse(const AlgorithmSpec& algorithm_spec, const KeyMaterial* key, BytesView input) {
    check_key_contract(algorithm_spec, key);
    if (input.empty()) raise(errc::invalid_input, "inverse on empty input");
    switch (algorithm_spec.id) {
    case AlgorithmId::bzip2: return impl::bzip2_decompress(input);
    case AlgorithmId::gzip: return impl::gzip_decompress(input);
    case AlgorithmId::lzma: return impl::xz_decompress(input);
    case AlgorithmId::zip_container: return impl::zip_decompress(input);
    case AlgorithmId::aes: return impl::aes_gcm_decrypt(input, as_view(key->key));
    case AlgorithmId::fernet: return impl::fernet_decrypt(input, as_view(key->key));
    case AlgorithmId::xsalsa20: return impl::secretbox_decrypt(input, as_view(key->key));
    }
    raise(errc::invalid_input, "unknown algorithm");
}

// ---------------------------------------------------------------------------
// base64url codec for standard fernet token interop
// ---------------------------------------------------------------------------

namespace fernet {

namespace {
const char kB64Alphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_";

int b64_value(char c) {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '-') return 62;
    if (c == '_') return 63;
    return -1;
}
} // namespace

std::string to_standard_token(BytesView raw_token) {
    std::string out;
    out.reserve((raw_token.size() + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 3 <= raw_token.size(); i += 3) {
        std::uint32_t v = (raw_token[i] << 16) | (raw_token[i + 1] << 8) | raw_token[i + 2];
        out.push_back(kB64Alphabet[(v >> 18) & 63]);
        out.push_back(kB64Alphabet[(v >> 12) & 63]);
        out.push_back(kB64Alphabet[(v >> 6) & 63]);
        out.push_back(kB64Alphabet[v & 63]);
    }
    std::size_t rem = raw_token.size() - i;
    if (rem == 1) {
        std::uint32_t v = raw_token[i] << 16;
        out.push_back(kB64Alphabet[(v >> 18) & 63]);
        out.push_back(kB64Alphabet[(v >> 12) & 63]);
        out += "==";
    } else if (rem == 2) {
        std::uint32_t v = (raw_token[i] << 16) | (raw_token[i + 1] << 8);
        out.push_back(kB64Alphabet[(v >> 18) & 63]);
        out.push_back(kB64Alphabet[(v >> 12) & 63]);
        out.push_back(kB64Alphabet[(v >> 6) & 63]);
        out.push_back('=');
    }
    return out;
}

Bytes from_standard_token(std::string_view token) {
    while (!token.empty() && token.back() == '=') token.remove_suffix(1);
    if (token.size() % 4 == 1) raise(errc::invalid_input, "bad base64url length");
    Bytes out;
    out.reserve(token.size() * 3 / 4);
    std::uint32_t acc = 0;
    int bits = 0;
    for (char c : token) {
        int v = b64_value(c);
        if (v < 0) raise(errc::invalid_input, "bad base64url character");
        acc = (acc << 6) | static_cast<std::uint32_t>(v);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<std::uint8_t>((acc >> bits) & 0xFF));
        }
    }
    return out;
}

} // namespace fernet

} // namespace cebench::stages
