#include <cstring>
#include <ctime>
#include <mutex>

#include <openssl/evp.h>
#include <sodium.h>

#include "cebench/errors.hpp"
#include "stage_impl.hpp"

namespace cebench::stages::impl {

namespace {

constexpr std::size_t kGcmNonceLen = 12;
constexpr std::size_t kGcmTagLen = 16;
constexpr std::size_t kFernetIvLen = 16;
constexpr std::size_t kFernetHmacLen = 32;
constexpr std::size_t kFernetHeaderLen = 1 + 8 + kFernetIvLen;
constexpr std::uint8_t kFernetVersion = 0x80;

struct EvpCtx {
    EVP_CIPHER_CTX* ctx;
    EvpCtx() : ctx(EVP_CIPHER_CTX_new()) {
        if (!ctx) raise(errc::integrity, "EVP_CIPHER_CTX_new failed");
    }
    ~EvpCtx() { EVP_CIPHER_CTX_free(ctx); }
};

void hmac_sha256(BytesView key, BytesView data, std::uint8_t out[kFernetHmacLen]) {
    crypto_auth_hmacsha256_state st;
    crypto_auth_hmacsha256_init(&st, key.data(), key.size());
    crypto_auth_hmacsha256_update(&st, data.data(), data.size());
    crypto_auth_hmacsha256_final(&st, out);
}

} // namespace

void ensure_sodium() {
    static std::once_flag flag;
    std::call_once(flag, [] {
        if (sodium_init() < 0) raise(errc::integrity, "sodium_init failed");
    });
}

// ---------------------------------------------------------------------------
// AES-256-GCM: nonce(12) ‖ ciphertext ‖ tag(16)
// ---------------------------------------------------------------------------

Bytes aes_gcm_encrypt(BytesView input, BytesView key, BytesView nonce) {
    EvpCtx c;
    if (EVP_EncryptInit_ex(c.ctx, EVP_aes_256_gcm(), nullptr, nullptr, nullptr) != 1 ||
        EVP_CIPHER_CTX_ctrl(c.ctx, EVP_CTRL_GCM_SET_IVLEN, kGcmNonceLen, nullptr) != 1 ||
        EVP_EncryptInit_ex(c.ctx, nullptr, nullptr, key.data(), nonce.data()) != 1) {
        raise(errc::integrity, "aes-gcm init failed");
    }
    Bytes out(kGcmNonceLen + input.size() + kGcmTagLen);
    std::memcpy(out.data(), nonce.data(), kGcmNonceLen);
    int len = 0;
    if (EVP_EncryptUpdate(c.ctx, out.data() + kGcmNonceLen, &len, input.data(),
                          static_cast<int>(input.size())) != 1) {
        raise(errc::integrity, "aes-gcm encrypt failed");
    }
    int fin = 0;
    if (EVP_EncryptFinal_ex(c.ctx, out.data() + kGcmNonceLen + len, &fin) != 1) {
        raise(errc::integrity, "aes-gcm finalize failed");
    }
    if (EVP_CIPHER_CTX_ctrl(c.ctx, EVP_CTRL_GCM_GET_TAG, kGcmTagLen,
                            out.data() + kGcmNonceLen + input.size()) != 1) {
        raise(errc::integrity, "aes-gcm tag retrieval failed");
    }
    return out;
}

Bytes aes_gcm_decrypt(BytesView input, BytesView key) {
    if (input.size() < kGcmNonceLen + kGcmTagLen) {
        raise(errc::integrity, "aes-gcm input shorter than nonce+tag");
    }
    std::size_t ct_len = input.size() - kGcmNonceLen - kGcmTagLen;
    EvpCtx c;
    if (EVP_DecryptInit_ex(c.ctx, EVP_aes_256_gcm(), nullptr, nullptr, nullptr) != 1 ||
        EVP_CIPHER_CTX_ctrl(c.ctx, EVP_CTRL_GCM_SET_IVLEN, kGcmNonceLen, nullptr) != 1 ||
        EVP_DecryptInit_ex(c.ctx, nullptr, nullptr, key.data(), input.data()) != 1) {
        raise(errc::integrity, "aes-gcm init failed");
    }
    Bytes out(ct_len);
    int len = 0;
    if (EVP_DecryptUpdate(c.ctx, out.data(), &len, input.data() + kGcmNonceLen,
                          static_cast<int>(ct_len)) != 1) {
        raise(errc::integrity, "aes-gcm decrypt failed");
    }
    Bytes tag(input.end() - kGcmTagLen, input.end());
    if (EVP_CIPHER_CTX_ctrl(c.ctx, EVP_CTRL_GCM_SET_TAG, kGcmTagLen, tag.data()) != 1) {
        raise(errc::integrity, "aes-gcm tag set failed");
    }
    int fin = 0;
    if (EVP_DecryptFinal_ex(c.ctx, out.data() + len, &fin) != 1) {
        raise(errc::authentication, "aes-gcm tag verification failed");
    }
    return out;
}

// ---------------------------------------------------------------------------
// fernet (AES-128-CBC + HMAC-SHA256), raw binary token layout:
//   0x80 ‖ timestamp(8, big-endian seconds) ‖ iv(16) ‖ ciphertext ‖ hmac(32)
// Key is 32 bytes: signing key first, encryption key second.
// ---------------------------------------------------------------------------

Bytes fernet_encrypt(BytesView input, BytesView key, BytesView iv) {
    ensure_sodium();
    BytesView signing_key = key.subspan(0, 16);
    BytesView enc_key = key.subspan(16, 16);

    EvpCtx c;
    if (EVP_EncryptInit_ex(c.ctx, EVP_aes_128_cbc(), nullptr, enc_key.data(), iv.data()) != 1) {
        raise(errc::integrity, "fernet cbc init failed");
    }
    std::size_t padded = input.size() + 16 - input.size() % 16;
    Bytes out(kFernetHeaderLen + padded + kFernetHmacLen);
    out[0] = kFernetVersion;
    std::uint64_t ts = static_cast<std::uint64_t>(std::time(nullptr));
    for (int i = 0; i < 8; ++i) out[1 + i] = static_cast<std::uint8_t>(ts >> (8 * (7 - i)));
    std::memcpy(out.data() + 9, iv.data(), kFernetIvLen);

    int len = 0;
    if (EVP_EncryptUpdate(c.ctx, out.data() + kFernetHeaderLen, &len, input.data(),
                          static_cast<int>(input.size())) != 1) {
        raise(errc::integrity, "fernet encrypt failed");
    }
    int fin = 0;
    if (EVP_EncryptFinal_ex(c.ctx, out.data() + kFernetHeaderLen + len, &fin) != 1) {
        raise(errc::integrity, "fernet finalize failed");
    }
    if (static_cast<std::size_t>(len + fin) != padded) {
        raise(errc::integrity, "fernet padding length mismatch");
    }
    hmac_sha256(signing_key, BytesView(out.data(), kFernetHeaderLen + padded),
                out.data() + kFernetHeaderLen + padded);
    return out;
}

Bytes fernet_decrypt(BytesView input, BytesView key) {
    ensure_sodium();
    if (input.size() < kFernetHeaderLen + 16 + kFernetHmacLen) {
        raise(errc::integrity, "fernet token too short");
    }
    if (input[0] != kFernetVersion) raise(errc::integrity, "bad fernet version byte");
    BytesView signing_key = key.subspan(0, 16);
    BytesView enc_key = key.subspan(16, 16);

    std::size_t body_len = input.size() - kFernetHmacLen;
    std::uint8_t expected[kFernetHmacLen];
    hmac_sha256(signing_key, input.subspan(0, body_len), expected);
    if (sodium_memcmp(expected, input.data() + body_len, kFernetHmacLen) != 0) {
        raise(errc::authentication, "fernet hmac mismatch");
    }

    std::size_t ct_len = body_len - kFernetHeaderLen;
    if (ct_len == 0 || ct_len % 16 != 0) raise(errc::integrity, "fernet ciphertext misaligned");
    EvpCtx c;
    if (EVP_DecryptInit_ex(c.ctx, EVP_aes_128_cbc(), nullptr, enc_key.data(),
                           input.data() + 9) != 1) {
        raise(errc::integrity, "fernet cbc init failed");
    }
    Bytes out(ct_len);
    int len = 0;
    if (EVP_DecryptUpdate(c.ctx, out.data(), &len, input.data() + kFernetHeaderLen,
                          static_cast<int>(ct_len)) != 1) {
        raise(errc::integrity, "fernet decrypt failed");
    }
    int fin = 0;
    if (EVP_DecryptFinal_ex(c.ctx, out.data() + len, &fin) != 1) {
        raise(errc::authentication, "fernet padding check failed");
    }
    out.resize(static_cast<std::size_t>(len) + static_cast<std::size_t>(fin));
    return out;
}

// ---------------------------------------------------------------------------
// XSalsa20-Poly1305: nonce(24) ‖ ciphertext ‖ tag(16)
// ---------------------------------------------------------------------------

Bytes secretbox_encrypt(BytesView input, BytesView key, BytesView nonce) {
    ensure_sodium();
    Bytes out(crypto_secretbox_NONCEBYTES + input.size() + crypto_secretbox_MACBYTES);
    std::memcpy(out.data(), nonce.data(), crypto_secretbox_NONCEBYTES);
    crypto_secretbox_detached(out.data() + crypto_secretbox_NONCEBYTES,
                              out.data() + crypto_secretbox_NONCEBYTES + input.size(),
                              input.data(), input.size(), nonce.data(), key.data());
    return out;
}

Bytes secretbox_decrypt(BytesView input, BytesView key) {
    ensure_sodium();
    if (input.size() < crypto_secretbox_NONCEBYTES + crypto_secretbox_MACBYTES) {
        raise(errc::integrity, "secretbox input shorter than nonce+tag");
    }
    std::size_t ct_len = input.size() - crypto_secretbox_NONCEBYTES - crypto_secretbox_MACBYTES;
    Bytes out(ct_len);
    int rc = crypto_secretbox_open_detached(
        out.data(), input.data() + crypto_secretbox_NONCEBYTES,
        input.data() + crypto_secretbox_NONCEBYTES + ct_len, ct_len, input.data(), key.data());
    if (rc != 0) raise(errc::authentication, "secretbox authentication failed");
    return out;
}

} // namespace cebench::stages::impl
