#include "cebench/corpus.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "cebench/errors.hpp"
#include "cebench/rng.hpp"
#include "generators.hpp"

namespace cebench::corpus {

using nlohmann::json;

const char* to_string(ContentClass c) {
    switch (c) {
    case ContentClass::structured_csv: return "structured-csv";
    case ContentClass::binary_packet: return "binary-packet";
    case ContentClass::natural_text: return "natural-text";
    case ContentClass::document_binary: return "document-binary";
    }
    return "unknown";
}

std::optional<ContentClass> parse_content_class(std::string_view s) {
    if (s == "structured-csv") return ContentClass::structured_csv;
    if (s == "binary-packet") return ContentClass::binary_packet;
    if (s == "natural-text") return ContentClass::natural_text;
    if (s == "document-binary") return ContentClass::document_binary;
    return std::nullopt;
}

std::vector<Profile> table2_profiles() {
    return {
        {"gps-sample", 85, ContentClass::structured_csv, "vehicle-gps"},
        {"novatel-gps", 174, ContentClass::structured_csv, "novatel-gps"},
        {"novatel-imu", 362, ContentClass::structured_csv, "novatel-imu"},
        {"novatel-gps-enhanced", 451, ContentClass::structured_csv, "novatel-gps-enhanced"},
        {"ouster-telemetry", 520, ContentClass::binary_packet, "ouster-telemetry"},
        {"novatel-odometry", 564, ContentClass::structured_csv, "novatel-odometry"},
        {"ouster-lidar-packet", 1206, ContentClass::binary_packet, "ouster-lidar"},
        {"mobileye-lane", 5052, ContentClass::structured_csv, "mobileye-lane"},
        {"enwik-1mb", 1086844, ContentClass::natural_text, ""},
        {"enwik-10mb", 10239975, ContentClass::natural_text, ""},
        {"pdf-document", 11081517, ContentClass::document_binary, ""},
        {"enwik-95mb", 101128023, ContentClass::natural_text, ""},
    };
}

Bytes generate_content(std::uint64_t seed, std::size_t profile_index, const Profile& profile) {
    if (profile.byte_length == 0) {
        raise(errc::invalid_input, "profile '" + profile.id + "' has zero byte_length");
    }
    std::uint64_t stream_seed = mix_seed(seed, profile_index);
    switch (profile.content_class) {
    case ContentClass::structured_csv:
        return gen::structured_csv(stream_seed, profile.byte_length, profile.label);
    case ContentClass::binary_packet:
        return gen::binary_packet(stream_seed, profile.byte_length, profile.label);
    case ContentClass::natural_text:
        return gen::natural_text(stream_seed, profile.byte_length);
    case ContentClass::document_binary:
        return gen::document_binary(stream_seed, profile.byte_length);
    }
    raise(errc::invalid_input, "unknown content class");
}

static std::string iso8601_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

GeneratedCorpus generate_corpus(std::uint64_t seed, const std::vector<Profile>& profiles) {
    if (profiles.empty()) raise(errc::invalid_input, "no profiles given");
    std::set<std::string> ids;
    GeneratedCorpus out;
    out.manifest.seed = seed;
    out.manifest.created_at = iso8601_now();
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        const Profile& p = profiles[i];
        if (!ids.insert(p.id).second) raise(errc::invalid_input, "duplicate profile id: " + p.id);
        Bytes content = generate_content(seed, i, p);
        FileSpec spec;
        spec.id = p.id;
        spec.byte_length = content.size();
        spec.content_class = p.content_class;
        spec.provenance.kind = Provenance::Kind::generated;
        spec.provenance.seed = seed;
        spec.checksum = sha256(as_view(content));
        out.manifest.entries.push_back(std::move(spec));
        out.contents.push_back(std::move(content));
    }
    return out;
}

FileSpec load_external(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(errc::io, "cannot open " + path.string());
    Bytes content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) raise(errc::io, "read failed for " + path.string());
    if (content.empty()) raise(errc::invalid_input, "empty file: " + path.string());

    FileSpec spec;
    spec.id = path.stem().string();
    spec.byte_length = content.size();
    spec.provenance.kind = Provenance::Kind::external;
    spec.provenance.path = path.string();
    spec.checksum = sha256(as_view(content));

    // content-class sniff: PDF magic, then printable/CSV heuristics
    std::string_view head(reinterpret_cast<const char*>(content.data()),
                          std::min<std::size_t>(content.size(), 4096));
    if (head.starts_with("%PDF")) {
        spec.content_class = ContentClass::document_binary;
    } else {
        std::size_t printable = 0, commas = 0, newlines = 0;
        for (unsigned char c : head) {
            if (c == ',') ++commas;
            if (c == '\n') ++newlines;
            if (c == '\t' || c == '\n' || c == '\r' || (c >= 0x20 && c < 0x7F)) ++printable;
        }
        if (printable * 100 >= head.size() * 97) {
            spec.content_class = (newlines > 0 && commas >= newlines)
                                     ? ContentClass::structured_csv
                                     : ContentClass::natural_text;
        } else {
            spec.content_class = ContentClass::binary_packet;
        }
    }
    return spec;
}

FileSpec slice_source(const FileSpec& source, BytesView source_content, std::uint64_t length,
                      const std::string& slice_id) {
    if (length > source_content.size()) {
        raise(errc::out_of_range, "slice of " + std::to_string(length) + " bytes from " +
                                      std::to_string(source_content.size()));
    }
    FileSpec spec;
    spec.id = slice_id.empty() ? source.id + "-" + std::to_string(length) + "b" : slice_id;
    spec.byte_length = length;
    spec.content_class = source.content_class;
    spec.provenance.kind = Provenance::Kind::sliced;
    spec.provenance.source_id = source.id;
    spec.provenance.offset = 0;
    spec.provenance.length = length;
    spec.checksum = sha256(source_content.subspan(0, length));
    return spec;
}

bool verify(const FileSpec& spec, BytesView content) {
    return content.size() == spec.byte_length && sha256(content) == spec.checksum;
}

static json provenance_to_json(const Provenance& p) {
    switch (p.kind) {
    case Provenance::Kind::generated: return {{"kind", "generated"}, {"seed", p.seed}};
    case Provenance::Kind::external: return {{"kind", "external"}, {"path", p.path}};
    case Provenance::Kind::sliced:
        return {{"kind", "sliced"},
                {"source_id", p.source_id},
                {"offset", p.offset},
                {"length", p.length}};
    }
    return {};
}

static Provenance provenance_from_json(const json& j) {
    Provenance p;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "generated") {
        p.kind = Provenance::Kind::generated;
        p.seed = j.at("seed").get<std::uint64_t>();
    } else if (kind == "external") {
        p.kind = Provenance::Kind::external;
        p.path = j.at("path").get<std::string>();
    } else if (kind == "sliced") {
        p.kind = Provenance::Kind::sliced;
        p.source_id = j.at("source_id").get<std::string>();
        p.offset = j.at("offset").get<std::uint64_t>();
        p.length = j.at("length").get<std::uint64_t>();
    } else {
        raise(errc::schema, "unknown provenance kind: " + kind);
    }
    return p;
}

std::string manifest_to_json(const CorpusManifest& manifest) {
    json entries = json::array();
    for (const FileSpec& e : manifest.entries) {
        entries.push_back({{"id", e.id},
                           {"byte_length", e.byte_length},
                           {"content_class", to_string(e.content_class)},
                           {"provenance", provenance_to_json(e.provenance)},
                           {"checksum_hex", digest_hex(e.checksum)}});
    }
    json j = {{"schema_version", 1},
              {"seed", manifest.seed},
              {"created_at", manifest.created_at},
              {"entries", entries}};
    return j.dump(2) + "\n";
}

CorpusManifest manifest_from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        raise(errc::schema, std::string("manifest parse failed: ") + e.what());
    }
    try {
        CorpusManifest m;
        m.seed = j.at("seed").get<std::uint64_t>();
        m.created_at = j.value("created_at", "");
        for (const json& je : j.at("entries")) {
            FileSpec e;
            e.id = je.at("id").get<std::string>();
            e.byte_length = je.at("byte_length").get<std::uint64_t>();
            auto cc = parse_content_class(je.at("content_class").get<std::string>());
            if (!cc) raise(errc::schema, "bad content_class for entry " + e.id);
            e.content_class = *cc;
            e.provenance = provenance_from_json(je.at("provenance"));
            e.checksum = digest_from_hex(je.at("checksum_hex").get<std::string>());
            m.entries.push_back(std::move(e));
        }
        return m;
    } catch (const json::exception& e) {
        raise(errc::schema, std::string("manifest field error: ") + e.what());
    }
}

void write_corpus(const GeneratedCorpus& corpus, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) raise(errc::io, "cannot create " + dir.string() + ": " + ec.message());
    for (std::size_t i = 0; i < corpus.manifest.entries.size(); ++i) {
        const FileSpec& e = corpus.manifest.entries[i];
        std::filesystem::path p = dir / (e.id + ".bin");
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        if (!out) raise(errc::io, "cannot write " + p.string());
        out.write(reinterpret_cast<const char*>(corpus.contents[i].data()),
                  static_cast<std::streamsize>(corpus.contents[i].size()));
        if (!out) raise(errc::io, "write failed for " + p.string());
    }
    std::ofstream mf(dir / "manifest.json", std::ios::trunc);
    if (!mf) raise(errc::io, "cannot write manifest.json");
    mf << manifest_to_json(corpus.manifest);
}

CorpusManifest read_manifest(const std::filesystem::path& dir) {
    std::filesystem::path p = dir / "manifest.json";
    std::ifstream in(p);
    if (!in) raise(errc::io, "cannot open " + p.string() + " (run gen-corpus first)");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return manifest_from_json(text);
}

Bytes read_entry(const std::filesystem::path& dir, const FileSpec& spec) {
    std::filesystem::path p = dir / (spec.id + ".bin");
    std::ifstream in(p, std::ios::binary);
    if (!in) raise(errc::io, "cannot open " + p.string());
    Bytes content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) raise(errc::io, "read failed for " + p.string());
    return content;
}

} // namespace cebench::corpus
