#include <algorithm>
#include <cstring>
#include <limits>

#include <lzma.h>
#include <zlib.h>

#if CEBENCH_HAVE_BZLIB_H
#include <bzlib.h>
#else
// bzip2 runtime is present but the header is not installed; the 1.0.x ABI
// has been frozen for two decades, so declare the pieces we use.
extern "C" {
typedef struct {
    char* next_in;
    unsigned int avail_in;
    unsigned int total_in_lo32;
    unsigned int total_in_hi32;
    char* next_out;
    unsigned int avail_out;
    unsigned int total_out_lo32;
    unsigned int total_out_hi32;
    void* state;
    void* (*bzalloc)(void*, int, int);
    void (*bzfree)(void*, void*);
    void* opaque;
} bz_stream;

int BZ2_bzCompressInit(bz_stream*, int blockSize100k, int verbosity, int workFactor);
int BZ2_bzCompress(bz_stream*, int action);
int BZ2_bzCompressEnd(bz_stream*);
int BZ2_bzDecompressInit(bz_stream*, int verbosity, int small);
int BZ2_bzDecompress(bz_stream*);
int BZ2_bzDecompressEnd(bz_stream*);
}
#define BZ_RUN 0
#define BZ_FINISH 2
#define BZ_OK 0
#define BZ_RUN_OK 1
#define BZ_FINISH_OK 3
#define BZ_STREAM_END 4
#endif

#include "cebench/errors.hpp"
#include "stage_impl.hpp"

namespace cebench::stages::impl {

namespace {

// Decompressed-size guess when the container does not record one: most
// corpus payloads expand <4x, and the cap keeps huge ciphertext inputs from
// quadrupling the allocation.
std::size_t initial_capacity(std::size_t input_size) {
    std::size_t guess = std::max<std::size_t>(std::size_t{1} << 20, input_size * 4);
    return std::min(guess, input_size + (std::size_t{64} << 20));
}

std::uint32_t crc32_of(BytesView data) {
    return static_cast<std::uint32_t>(
        ::crc32(0L, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size())));
}

} // namespace

// ---------------------------------------------------------------------------
// gzip (RFC 1952 container via zlib)
// ---------------------------------------------------------------------------

Bytes gzip_compress(BytesView input, int level) {
    z_stream zs{};
    if (deflateInit2(&zs, level, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY) != Z_OK) {
        raise(errc::integrity, "deflateInit2 failed");
    }
    Bytes out(deflateBound(&zs, static_cast<uLong>(input.size())));
    zs.next_in = const_cast<Bytef*>(reinterpret_cast<const Bytef*>(input.data()));
    zs.avail_in = static_cast<uInt>(input.size());
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    int rc = deflate(&zs, Z_FINISH);
    std::size_t produced = zs.total_out;
    deflateEnd(&zs);
    if (rc != Z_STREAM_END) raise(errc::integrity, "deflate did not finish");
    out.resize(produced);
    return out;
}

Bytes gzip_decompress(BytesView input) {
    if (input.size() < 18) raise(errc::integrity, "truncated gzip stream");
    // ISIZE trailer holds the original length mod 2^32; use it as the first
    // allocation and keep growing in case of wraparound.
    std::uint32_t isize = 0;
    std::memcpy(&isize, input.data() + input.size() - 4, 4);
    z_stream zs{};
    if (inflateInit2(&zs, 15 + 16) != Z_OK) raise(errc::integrity, "inflateInit2 failed");
    Bytes out(std::max<std::size_t>(isize, 64));
    zs.next_in = const_cast<Bytef*>(reinterpret_cast<const Bytef*>(input.data()));
    zs.avail_in = static_cast<uInt>(input.size());
    std::size_t total = 0;
    int rc;
    for (;;) {
        zs.next_out = out.data() + total;
        zs.avail_out = static_cast<uInt>(
            std::min<std::size_t>(out.size() - total, std::numeric_limits<uInt>::max()));
        rc = inflate(&zs, Z_NO_FLUSH);
        total = zs.total_out;
        if (rc == Z_STREAM_END) break;
        if (rc != Z_OK && rc != Z_BUF_ERROR) {
            inflateEnd(&zs);
            raise(errc::integrity, std::string("gzip decompression failed: ") +
                                       (zs.msg ? zs.msg : zError(rc)));
        }
        if (total == out.size()) {
            out.resize(out.size() + out.size() / 2 + 4096);
        } else if (rc == Z_BUF_ERROR) {
            inflateEnd(&zs);
            raise(errc::integrity, "truncated gzip stream");
        }
    }
    inflateEnd(&zs);
    out.resize(total);
    return out;
}

// ---------------------------------------------------------------------------
// bzip2
// ---------------------------------------------------------------------------

Bytes bzip2_compress(BytesView input, int block_size_100k) {
    bz_stream bs{};
    if (BZ2_bzCompressInit(&bs, block_size_100k, 0, 0) != BZ_OK) {
        raise(errc::integrity, "bzCompressInit failed");
    }
    Bytes out(input.size() + input.size() / 100 + 600);
    bs.next_in = const_cast<char*>(reinterpret_cast<const char*>(input.data()));
    bs.avail_in = static_cast<unsigned>(input.size());
    std::size_t produced = 0;
    int rc;
    do {
        bs.next_out = reinterpret_cast<char*>(out.data()) + produced;
        bs.avail_out = static_cast<unsigned>(
            std::min<std::size_t>(out.size() - produced, std::numeric_limits<unsigned>::max()));
        rc = BZ2_bzCompress(&bs, BZ_FINISH);
        produced = (static_cast<std::size_t>(bs.total_out_hi32) << 32) | bs.total_out_lo32;
        if (rc == BZ_FINISH_OK && bs.avail_out == 0) {
            out.resize(out.size() + out.size() / 2 + 4096);
        }
    } while (rc == BZ_FINISH_OK);
    BZ2_bzCompressEnd(&bs);
    if (rc != BZ_STREAM_END) raise(errc::integrity, "bzCompress did not finish");
    out.resize(produced);
    return out;
}

Bytes bzip2_decompress(BytesView input) {
    bz_stream bs{};
    if (BZ2_bzDecompressInit(&bs, 0, 0) != BZ_OK) {
        raise(errc::integrity, "bzDecompressInit failed");
    }
    Bytes out(initial_capacity(input.size()));
    bs.next_in = const_cast<char*>(reinterpret_cast<const char*>(input.data()));
    bs.avail_in = static_cast<unsigned>(input.size());
    std::size_t total = 0;
    for (;;) {
        bs.next_out = reinterpret_cast<char*>(out.data()) + total;
        bs.avail_out = static_cast<unsigned>(
            std::min<std::size_t>(out.size() - total, std::numeric_limits<unsigned>::max()));
        int rc = BZ2_bzDecompress(&bs);
        total = (static_cast<std::size_t>(bs.total_out_hi32) << 32) | bs.total_out_lo32;
        if (rc == BZ_STREAM_END) break;
        if (rc != BZ_OK) {
            BZ2_bzDecompressEnd(&bs);
            raise(errc::integrity, "bzip2 decompression failed (rc=" + std::to_string(rc) + ")");
        }
        if (bs.avail_out == 0) {
            out.resize(out.size() + out.size() / 2 + 4096);
        } else if (bs.avail_in == 0) {
            BZ2_bzDecompressEnd(&bs);
            raise(errc::integrity, "truncated bzip2 stream");
        }
    }
    BZ2_bzDecompressEnd(&bs);
    out.resize(total);
    return out;
}

// ---------------------------------------------------------------------------
// lzma (.xz container)
// ---------------------------------------------------------------------------

Bytes xz_compress(BytesView input, std::uint32_t preset) {
    std::size_t cap = lzma_stream_buffer_bound(input.size());
    Bytes out(cap);
    std::size_t out_pos = 0;
    lzma_ret rc = lzma_easy_buffer_encode(preset, LZMA_CHECK_CRC64, nullptr, input.data(),
                                          input.size(), out.data(), &out_pos, cap);
    if (rc != LZMA_OK) raise(errc::integrity, "xz encode failed (rc=" + std::to_string(rc) + ")");
    out.resize(out_pos);
    return out;
}

Bytes xz_decompress(BytesView input) {
    lzma_stream strm = LZMA_STREAM_INIT;
    if (lzma_stream_decoder(&strm, UINT64_MAX, 0) != LZMA_OK) {
        raise(errc::integrity, "xz decoder init failed");
    }
    Bytes out(initial_capacity(input.size()));
    strm.next_in = input.data();
    strm.avail_in = input.size();
    std::size_t total = 0;
    for (;;) {
        strm.next_out = out.data() + total;
        strm.avail_out = out.size() - total;
        lzma_ret rc = lzma_code(&strm, LZMA_FINISH);
        total = out.size() - strm.avail_out;
        if (rc == LZMA_STREAM_END) break;
        if (rc == LZMA_OK || rc == LZMA_BUF_ERROR) {
            if (strm.avail_out == 0) {
                out.resize(out.size() + out.size() / 2 + 4096);
                continue;
            }
            lzma_end(&strm);
            raise(errc::integrity, "truncated xz stream");
        }
        lzma_end(&strm);
        raise(errc::integrity, "xz decompression failed (rc=" + std::to_string(rc) + ")");
    }
    lzma_end(&strm);
    out.resize(total);
    return out;
}

// ---------------------------------------------------------------------------
// single-member ZIP archive (member name "data", deflate)
// ---------------------------------------------------------------------------

namespace {

constexpr char kZipMember[] = "data";
constexpr std::size_t kZipMemberLen = 4;
// fixed DOS timestamp so archives are pure functions of their content
constexpr std::uint16_t kDosTime = 0;
constexpr std::uint16_t kDosDate = ((2024 - 1980) << 9) | (5 << 5) | 1;

void put_u16(Bytes& b, std::uint16_t v) {
    b.push_back(static_cast<std::uint8_t>(v & 0xFF));
    b.push_back(static_cast<std::uint8_t>(v >> 8));
}
void put_u32(Bytes& b, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}
std::uint16_t get_u16(BytesView b, std::size_t off) {
    return static_cast<std::uint16_t>(b[off] | (b[off + 1] << 8));
}
std::uint32_t get_u32(BytesView b, std::size_t off) {
    return static_cast<std::uint32_t>(b[off]) | (static_cast<std::uint32_t>(b[off + 1]) << 8) |
           (static_cast<std::uint32_t>(b[off + 2]) << 16) |
           (static_cast<std::uint32_t>(b[off + 3]) << 24);
}

Bytes deflate_raw(BytesView input, int level) {
    z_stream zs{};
    if (deflateInit2(&zs, level, Z_DEFLATED, -15, 8, Z_DEFAULT_STRATEGY) != Z_OK) {
        raise(errc::integrity, "deflateInit2(raw) failed");
    }
    Bytes out(deflateBound(&zs, static_cast<uLong>(input.size())));
    zs.next_in = const_cast<Bytef*>(reinterpret_cast<const Bytef*>(input.data()));
    zs.avail_in = static_cast<uInt>(input.size());
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    int rc = deflate(&zs, Z_FINISH);
    std::size_t produced = zs.total_out;
    deflateEnd(&zs);
    if (rc != Z_STREAM_END) raise(errc::integrity, "raw deflate did not finish");
    out.resize(produced);
    return out;
}

Bytes inflate_raw(BytesView input, std::size_t expected_size) {
    z_stream zs{};
    if (inflateInit2(&zs, -15) != Z_OK) raise(errc::integrity, "inflateInit2(raw) failed");
    Bytes out(expected_size);
    zs.next_in = const_cast<Bytef*>(reinterpret_cast<const Bytef*>(input.data()));
    zs.avail_in = static_cast<uInt>(input.size());
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    int rc = inflate(&zs, Z_FINISH);
    std::size_t produced = zs.total_out;
    inflateEnd(&zs);
    if (rc != Z_STREAM_END || produced != expected_size) {
        raise(errc::integrity, "zip member decompression failed");
    }
    out.resize(produced);
    return out;
}

} // namespace

Bytes zip_compress(BytesView input, int level) {
    if (input.size() >= 0xFFFFFFFFull) {
        raise(errc::invalid_input, "zip container limited to 4 GiB members");
    }
    Bytes deflated = deflate_raw(input, level);
    std::uint32_t crc = crc32_of(input);
    std::uint32_t comp_size = static_cast<std::uint32_t>(deflated.size());
    std::uint32_t uncomp_size = static_cast<std::uint32_t>(input.size());

    Bytes out;
    out.reserve(deflated.size() + 128);
    // local file header
    put_u32(out, 0x04034b50);
    put_u16(out, 20);        // version needed
    put_u16(out, 0);         // flags
    put_u16(out, 8);         // method: deflate
    put_u16(out, kDosTime);
    put_u16(out, kDosDate);
    put_u32(out, crc);
    put_u32(out, comp_size);
    put_u32(out, uncomp_size);
    put_u16(out, kZipMemberLen);
    put_u16(out, 0); // extra len
    out.insert(out.end(), kZipMember, kZipMember + kZipMemberLen);
    out.insert(out.end(), deflated.begin(), deflated.end());

    std::uint32_t cd_offset = static_cast<std::uint32_t>(out.size());
    // central directory entry
    put_u32(out, 0x02014b50);
    put_u16(out, 20); // version made by
    put_u16(out, 20); // version needed
    put_u16(out, 0);
    put_u16(out, 8);
    put_u16(out, kDosTime);
    put_u16(out, kDosDate);
    put_u32(out, crc);
    put_u32(out, comp_size);
    put_u32(out, uncomp_size);
    put_u16(out, kZipMemberLen);
    put_u16(out, 0); // extra
    put_u16(out, 0); // comment
    put_u16(out, 0); // disk number
    put_u16(out, 0); // internal attrs
    put_u32(out, 0); // external attrs
    put_u32(out, 0); // local header offset
    out.insert(out.end(), kZipMember, kZipMember + kZipMemberLen);
    std::uint32_t cd_size = static_cast<std::uint32_t>(out.size()) - cd_offset;

    // end of central directory
    put_u32(out, 0x06054b50);
    put_u16(out, 0);
    put_u16(out, 0);
    put_u16(out, 1);
    put_u16(out, 1);
    put_u32(out, cd_size);
    put_u32(out, cd_offset);
    put_u16(out, 0);
    return out;
}

Bytes zip_decompress(BytesView input) {
    if (input.size() < 22) raise(errc::integrity, "truncated zip archive");
    // EOCD scan from the tail (no archive comment is ever written, but stay
    // tolerant of one)
    std::size_t eocd = std::string::npos;
    std::size_t scan_start = input.size() >= 22 + 65536 ? input.size() - 22 - 65536 : 0;
    for (std::size_t i = input.size() - 22 + 1; i-- > scan_start;) {
        if (get_u32(input, i) == 0x06054b50) {
            eocd = i;
            break;
        }
    }
    if (eocd == std::string::npos) raise(errc::integrity, "zip end-of-directory not found");
    std::uint16_t entries = get_u16(input, eocd + 10);
    std::uint32_t cd_offset = get_u32(input, eocd + 16);
    if (entries != 1) raise(errc::integrity, "expected single-member archive");
    if (cd_offset + 46 > input.size() || get_u32(input, cd_offset) != 0x02014b50) {
        raise(errc::integrity, "zip central directory corrupt");
    }
    std::uint16_t method = get_u16(input, cd_offset + 10);
    std::uint32_t crc = get_u32(input, cd_offset + 16);
    std::uint32_t comp_size = get_u32(input, cd_offset + 20);
    std::uint32_t uncomp_size = get_u32(input, cd_offset + 24);
    std::uint32_t local_offset = get_u32(input, cd_offset + 42);
    if (method != 8) raise(errc::integrity, "unsupported zip method");
    if (local_offset + 30 > input.size() || get_u32(input, local_offset) != 0x04034b50) {
        raise(errc::integrity, "zip local header corrupt");
    }
    std::uint16_t name_len = get_u16(input, local_offset + 26);
    std::uint16_t extra_len = get_u16(input, local_offset + 28);
    std::size_t data_off = static_cast<std::size_t>(local_offset) + 30 + name_len + extra_len;
    if (data_off + comp_size > input.size()) raise(errc::integrity, "truncated zip member");
    Bytes out = inflate_raw(input.subspan(data_off, comp_size), uncomp_size);
    if (crc32_of(as_view(out)) != crc) raise(errc::integrity, "zip crc mismatch");
    return out;
}

} // namespace cebench::stages::impl
