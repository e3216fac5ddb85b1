#pragma once

#include <cstdint>

#include "cebench/bytes.hpp"

namespace cebench::stages::impl {

Bytes gzip_compress(BytesView input, int level);
Bytes gzip_decompress(BytesView input);

Bytes bzip2_compress(BytesView input, int block_size_100k);
Bytes bzip2_decompress(BytesView input);

Bytes xz_compress(BytesView input, std::uint32_t preset);
Bytes xz_decompress(BytesView input);

Bytes zip_compress(BytesView input, int level);
Bytes zip_decompress(BytesView input);

Bytes aes_gcm_encrypt(BytesView input, BytesView key, BytesView nonce);
Bytes aes_gcm_decrypt(BytesView input, BytesView key);

Bytes fernet_encrypt(BytesView input, BytesView key, BytesView iv);
Bytes fernet_decrypt(BytesView input, BytesView key);

Bytes secretbox_encrypt(BytesView input, BytesView key, BytesView nonce);
Bytes secretbox_decrypt(BytesView input, BytesView key);

void ensure_sodium();

} // namespace cebench::stages::impl
