#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cebench/bytes.hpp"
#include "cebench/digest.hpp"

namespace cebench::corpus {

enum class ContentClass {
    structured_csv,
    binary_packet,
    natural_text,
    document_binary,
};

const char* to_string(ContentClass c);
std::optional<ContentClass> parse_content_class(std::string_view s);

/// Where a corpus entry's bytes came from.
struct Provenance {
    enum class Kind { generated, external, sliced };
    Kind kind = Kind::generated;
    std::uint64_t seed = 0;      // generated
    std::string path;            // external
    std::string source_id;       // sliced
    std::uint64_t offset = 0;    // sliced (always 0: prefix slices)
    std::uint64_t length = 0;    // sliced
};

struct FileSpec {
    std::string id;
    std::uint64_t byte_length = 0;
    ContentClass content_class = ContentClass::natural_text;
    Provenance provenance;
    Digest256 checksum{};
};

struct CorpusManifest {
    std::uint64_t seed = 0;
    std::vector<FileSpec> entries;
    std::string created_at; // ISO 8601 UTC
};

/// One requested corpus entry. `label` selects the content flavor within a
/// class (which CSV schema, which packet layout); empty picks a default.
struct Profile {
    std::string id;
    std::uint64_t byte_length = 0;
    ContentClass content_class = ContentClass::natural_text;
    std::string label;
};

/// The 12 builtin size/type profiles (sensor CSVs, LiDAR packets, text
/// slices at 1/10/95 MB scale and a PDF-like document).
std::vector<Profile> table2_profiles();

/// Deterministic content for one profile. Same (seed, profile_index,
/// profile) always yields identical bytes.
Bytes generate_content(std::uint64_t seed, std::size_t profile_index, const Profile& profile);

struct GeneratedCorpus {
    CorpusManifest manifest;
    std::vector<Bytes> contents; // parallel to manifest.entries
};

GeneratedCorpus generate_corpus(std::uint64_t seed, const std::vector<Profile>& profiles);

FileSpec load_external(const std::filesystem::path& path);

/// Prefix slice of `length` bytes. `source_content` must match `source`.
FileSpec slice_source(const FileSpec& source, BytesView source_content, std::uint64_t length,
                      const std::string& slice_id = "");

bool verify(const FileSpec& spec, BytesView content);

/// Disk layout: <dir>/<id>.bin per entry plus <dir>/manifest.json.
void write_corpus(const GeneratedCorpus& corpus, const std::filesystem::path& dir);
CorpusManifest read_manifest(const std::filesystem::path& dir);
Bytes read_entry(const std::filesystem::path& dir, const FileSpec& spec);

std::string manifest_to_json(const CorpusManifest& manifest);
CorpusManifest manifest_from_json(const std::string& json_text);

} // namespace cebench::corpus
