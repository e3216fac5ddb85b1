#include "generators.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstring>
#include <string>
#include <unordered_set>
#include <vector>

#include "cebench/rng.hpp"

namespace cebench::corpus::gen {

namespace {

// ---------------------------------------------------------------------------
// natural text
// ---------------------------------------------------------------------------

const char* kOnsets[] = {"b",  "c",  "d",  "f",  "g",  "h",  "j",  "k",  "l",  "m",
                         "n",  "p",  "r",  "s",  "t",  "v",  "w",  "z",  "ch", "sh",
                         "th", "st", "br", "cl", "gr", "pl", "tr", "sp"};
const char* kNuclei[] = {"a",  "e",  "i",  "o",  "u",  "ai", "ea", "ee", "io",
                         "ou", "ar", "er", "or", "an", "en", "on", "in"};
const char* kCodas[] = {"", "n", "r", "s", "t", "l", "m", "d", "k", "p", "st", "nd", "nt", "rs", "ng", "ts"};

const char* kFunctionWords[] = {
    "the", "of",    "and",  "in",    "to",    "a",     "is",    "was",   "that",  "for",
    "it",  "as",    "with", "on",    "by",    "at",    "from",  "an",    "be",    "are",
    "this", "which", "or",   "were",  "has",   "had",   "have",  "not",   "but",   "also",
    "its", "their", "one",  "two",   "first", "new",   "more",  "other", "into",  "during",
    "between", "used", "known", "such", "most", "all",  "after", "time",  "may",   "city"};

std::vector<std::string> make_vocab(SplitMix64& rng, std::size_t count) {
    std::vector<std::string> words;
    std::unordered_set<std::string> seen;
    words.reserve(count);
    while (words.size() < count) {
        std::size_t syllables = 1 + rng.below(3);
        std::string w;
        for (std::size_t s = 0; s < syllables; ++s) {
            w += kOnsets[rng.below(std::size(kOnsets))];
            w += kNuclei[rng.below(std::size(kNuclei))];
            w += kCodas[rng.below(std::size(kCodas))];
        }
        if (w.size() >= 2 && w.size() <= 14 && seen.insert(w).second) {
            words.push_back(std::move(w));
        }
    }
    return words;
}

/// Sampling table giving roughly Zipfian word frequencies: function words
/// dominate, content words thin out with rank.
std::vector<const std::string*> make_freq_table(const std::vector<std::string>& function_words,
                                                const std::vector<std::string>& vocab) {
    std::vector<const std::string*> table;
    table.reserve(70000);
    for (std::size_t i = 0; i < function_words.size(); ++i) {
        std::size_t reps = std::max<std::size_t>(1, 260 / (i + 2));
        for (std::size_t r = 0; r < reps; ++r) table.push_back(&function_words[i]);
    }
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        std::size_t reps = std::max<std::size_t>(1, 170 / (i + 3));
        for (std::size_t r = 0; r < reps; ++r) table.push_back(&vocab[i]);
        if (table.size() > 68000) break;
    }
    return table;
}

struct TextState {
    SplitMix64 rng;
    std::vector<std::string> function_words;
    std::vector<std::string> vocab;
    std::vector<const std::string*> table;
    std::vector<std::string> phrases;
    std::vector<std::string> categories;
    std::uint64_t page_id;

    explicit TextState(std::uint64_t seed)
        : rng(seed), function_words(std::begin(kFunctionWords), std::end(kFunctionWords)),
          vocab(make_vocab(rng, 9000)), table(make_freq_table(function_words, vocab)) {
        phrases.reserve(4000);
        for (std::size_t i = 0; i < 4000; ++i) {
            std::size_t k = 3 + rng.below(6);
            std::string p;
            for (std::size_t j = 0; j < k; ++j) {
                if (j) p += ' ';
                p += word();
            }
            phrases.push_back(std::move(p));
        }
        for (std::size_t i = 0; i < 48; ++i) {
            categories.push_back(capitalize(vocab[rng.below(3000)]));
        }
        page_id = 1000 + rng.below(8000);
    }

    const std::string& word() { return *table[rng.below(table.size())]; }

    static std::string capitalize(std::string w) {
        if (!w.empty() && w[0] >= 'a' && w[0] <= 'z') w[0] = static_cast<char>(w[0] - 32);
        return w;
    }

    /// Rank-biased phrase pick: min of three uniforms.
    const std::string& phrase() {
        std::uint64_t r = rng.below(phrases.size());
        r = std::min(r, rng.below(phrases.size()));
        r = std::min(r, rng.below(phrases.size()));
        return phrases[r];
    }
};

void append_sentence(std::string& out, TextState& st) {
    std::size_t start = out.size();
    std::size_t segments = 1 + st.rng.below(3);
    for (std::size_t s = 0; s < segments; ++s) {
        if (s) out += ", ";
        if (st.rng.below(100) < 28) {
            out += st.phrase();
            continue;
        }
        std::size_t k = 2 + st.rng.below(6);
        for (std::size_t i = 0; i < k; ++i) {
            if (i) out += ' ';
            std::uint64_t deco = st.rng.below(100);
            if (deco < 8) {
                out += "[[";
                out += st.word();
                out += "]]";
            } else if (deco < 10) {
                out += "[[";
                out += st.word();
                out += '|';
                out += st.word();
                out += "]]";
            } else if (deco < 12) {
                out += "'''";
                out += st.word();
                out += "'''";
            } else if (deco < 14) {
                out += std::to_string(1800 + st.rng.below(225));
            } else {
                out += st.word();
            }
        }
    }
    if (out[start] >= 'a' && out[start] <= 'z') out[start] = static_cast<char>(out[start] - 32);
    out += ". ";
}

const char* kInfoboxFields[] = {"name",
                                "native_name",
                                "settlement_type",
                                "image_skyline",
                                "image_flag",
                                "pushpin_map",
                                "coordinates_display",
                                "subdivision_type",
                                "subdivision_name",
                                "established_title",
                                "established_date",
                                "area_total_km2",
                                "population_total",
                                "population_density_km2",
                                "timezone",
                                "utc_offset",
                                "elevation_m",
                                "website"};

void append_page(std::string& out, TextState& st) {
    char buf[256];
    auto& rng = st.rng;
    std::string title = TextState::capitalize(st.word());

    out += "  <page>\n    <title>";
    out += title;
    out += "</title>\n    <id>";
    out += std::to_string(st.page_id);
    out += "</id>\n    <revision>\n      <id>";
    out += std::to_string(st.page_id * 7 % 999983);
    std::snprintf(buf, sizeof buf,
                  "</id>\n      <timestamp>2005-%02u-%02uT%02u:%02u:%02uZ</timestamp>\n",
                  static_cast<unsigned>(1 + rng.below(9)), static_cast<unsigned>(1 + rng.below(28)),
                  static_cast<unsigned>(rng.below(24)), static_cast<unsigned>(rng.below(60)),
                  static_cast<unsigned>(rng.below(60)));
    out += buf;
    out += "      <contributor>\n        <username>";
    out += TextState::capitalize(st.word());
    out += "</username>\n        <id>";
    out += std::to_string(rng.below(99999));
    out += "</id>\n      </contributor>\n      <text xml:space=\"preserve\">";
    st.page_id += 1 + rng.below(5);

    if (rng.below(3) == 0) {
        out += "\n{{Infobox settlement\n";
        for (const char* field : kInfoboxFields) {
            if (rng.below(4) != 0) {
                out += "| ";
                out += field;
                out += " = ";
                out += st.word();
                out += '\n';
            }
        }
        out += "}}\n";
    }

    std::size_t sections = 1 + rng.below(4);
    for (std::size_t s = 0; s < sections; ++s) {
        if (s > 0) {
            out += "\n\n== ";
            out += TextState::capitalize(st.word());
            out += ' ';
            out += st.word();
            out += " ==\n";
        }
        std::size_t paragraphs = 1 + rng.below(3);
        for (std::size_t p = 0; p < paragraphs; ++p) {
            out += '\n';
            std::size_t sentences = 2 + rng.below(5);
            for (std::size_t i = 0; i < sentences; ++i) append_sentence(out, st);
        }
        if (rng.below(4) == 0) {
            out += "\n{{cite web|url=http://www.";
            out += st.word();
            out += ".org/";
            out += st.word();
            out += "|title=";
            out += TextState::capitalize(st.word());
            out += ' ';
            out += st.word();
            out += "|year=";
            out += std::to_string(1900 + rng.below(105));
            out += "}}";
        }
    }
    if (rng.below(3) == 0) {
        out += "\n\n== See also ==\n";
        std::size_t links = 2 + rng.below(6);
        for (std::size_t i = 0; i < links; ++i) {
            out += "* [[";
            out += TextState::capitalize(st.word());
            out += ' ';
            out += st.word();
            out += "]]\n";
        }
    }
    out += '\n';
    std::size_t cats = 1 + rng.below(3);
    for (std::size_t i = 0; i < cats; ++i) {
        out += "[[Category:";
        out += st.categories[rng.below(st.categories.size())];
        out += "]]\n";
    }
    out += "      </text>\n    </revision>\n  </page>\n";
}

// ---------------------------------------------------------------------------
// structured CSV
// ---------------------------------------------------------------------------

/// Fixed-point random walk; prints as a decimal with `frac_digits` places.
struct Walk {
    std::int64_t value;
    std::int64_t step;
    int frac_digits;

    std::string sample(SplitMix64& rng) {
        value += static_cast<std::int64_t>(rng.below(2 * step + 1)) - step;
        char buf[48];
        int digits = std::clamp(frac_digits, 1, 9);
        std::int64_t scale = 1;
        for (int i = 0; i < digits; ++i) scale *= 10;
        std::int64_t whole = value / scale;
        std::int64_t frac = value % scale;
        if (frac < 0) {
            frac = -frac;
            if (whole == 0) {
                std::snprintf(buf, sizeof buf, "-0.%0*lld", digits, static_cast<long long>(frac));
                return buf;
            }
        }
        std::snprintf(buf, sizeof buf, "%lld.%0*lld", static_cast<long long>(whole), digits,
                      static_cast<long long>(frac));
        return buf;
    }
};

/// One CSV column: either a fixed-point random walk or a uniform integer.
struct Column {
    bool is_walk = true;
    Walk walk{};
    std::uint64_t lo = 0, hi = 0;

    std::string sample(SplitMix64& rng) {
        return is_walk ? walk.sample(rng) : std::to_string(rng.range(lo, hi));
    }
};

struct CsvSchema {
    std::string header;
    std::vector<Column> columns; // in header order, timestamp excluded
};

CsvSchema csv_schema_for(const std::string& label, SplitMix64& rng) {
    CsvSchema s;
    auto walk = [&](std::int64_t base, std::int64_t jitter, std::int64_t step, int digits) {
        s.columns.push_back(Column{
            true, Walk{base + static_cast<std::int64_t>(rng.below(jitter)), step, digits}, 0, 0});
    };
    auto range = [&](std::uint64_t lo, std::uint64_t hi) {
        s.columns.push_back(Column{false, {}, lo, hi});
    };
    if (label == "novatel-imu") {
        s.header = "timestamp,gyro_x,gyro_y,gyro_z,accel_x,accel_y,accel_z,imu_status";
        for (int i = 0; i < 3; ++i) walk(0, 2000, 900, 5);  // rad/s
        for (int i = 0; i < 2; ++i) walk(0, 4000, 2500, 5); // m/s^2
        walk(980665, 300, 400, 5);                          // gravity axis
        range(0, 3);
    } else if (label == "novatel-odometry") {
        s.header = "timestamp,pos_x,pos_y,heading,velocity,angular_rate,wheel_ticks";
        walk(48230000, 9000, 1200, 3);
        walk(-1295000, 9000, 1200, 3);
        walk(182450, 900, 350, 3);
        walk(13400, 400, 260, 3);
        walk(0, 150, 90, 3);
        range(100000, 4000000);
    } else if (label == "mobileye-lane") {
        s.header = "timestamp,lane_id,quality,model_degree,c0,c1,c2,c3,view_range,marker_type";
        range(0, 4);
        range(0, 4);
        range(1, 3);
        walk(-175000, 9000, 700, 6);
        walk(1200, 600, 180, 6);
        walk(-310, 200, 60, 6);
        walk(12, 30, 9, 6);
        walk(72400, 5000, 900, 3);
        range(0, 6);
    } else if (label == "novatel-gps-enhanced") {
        s.header =
            "timestamp,latitude,longitude,altitude,lat_stddev,lon_stddev,alt_stddev,"
            "undulation,num_sats";
        walk(44975310, 4000, 11, 6);
        walk(-93234710, 4000, 13, 6);
        walk(256312, 900, 40, 3);
        walk(1210, 250, 45, 3);
        walk(1455, 250, 45, 3);
        walk(2730, 400, 60, 3);
        walk(-28190, 100, 6, 3);
        range(7, 15);
    } else { // vehicle-gps, novatel-gps, default
        s.header = "timestamp,latitude,longitude,altitude,fix_quality,num_sats,hdop";
        walk(44975310, 4000, 11, 6);
        walk(-93234710, 4000, 13, 6);
        walk(256312, 900, 40, 3);
        range(1, 2);
        range(7, 15);
        walk(1240, 200, 35, 3); // hdop
    }
    return s;
}

// ---------------------------------------------------------------------------
// binary packets
// ---------------------------------------------------------------------------

void put_u16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>(v >> 8));
}
void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

} // namespace

Bytes natural_text(std::uint64_t seed, std::uint64_t length) {
    TextState state(seed);
    std::string out;
    out.reserve(length + 16384);
    out += "<mediawiki xmlns=\"http://www.mediawiki.org/xml/export-0.3/\" xml:lang=\"en\">\n";
    while (out.size() < length) append_page(out, state);
    out.resize(length);
    return Bytes(out.begin(), out.end());
}

Bytes structured_csv(std::uint64_t seed, std::uint64_t length, const std::string& label) {
    SplitMix64 rng(seed);
    CsvSchema schema = csv_schema_for(label, rng);
    std::string out;
    out.reserve(length + 256);
    out += schema.header;
    out += '\n';
    std::uint64_t ts_micro = 1715003125100000ULL + rng.below(86400000000ULL);
    while (out.size() < length) {
        ts_micro += 9000 + rng.below(3000);
        char buf[32];
        std::snprintf(buf, sizeof buf, "%llu.%03llu",
                      static_cast<unsigned long long>(ts_micro / 1000000),
                      static_cast<unsigned long long>(ts_micro % 1000000 / 1000));
        out += buf;
        for (Column& column : schema.columns) {
            out += ',';
            out += column.sample(rng);
        }
        out += '\n';
    }
    out.resize(length);
    return Bytes(out.begin(), out.end());
}

Bytes binary_packet(std::uint64_t seed, std::uint64_t length, const std::string& label) {
    SplitMix64 rng(seed);
    std::string out;
    out.reserve(length + 1024);
    bool telemetry = label == "ouster-telemetry";
    std::uint64_t ts = 681253390123456ULL + rng.below(1000000000ULL);
    std::uint16_t measurement_id = static_cast<std::uint16_t>(rng.below(2048));
    std::uint16_t frame_id = static_cast<std::uint16_t>(rng.below(65536));
    std::uint32_t range_walk = 14000 + static_cast<std::uint32_t>(rng.below(4000));

    while (out.size() < length) {
        if (telemetry) {
            // status frame: mostly steady fields plus jittery analog readings
            put_u64(out, ts);
            ts += 10000000 + rng.below(200000);
            put_u32(out, 0x00532049u); // product line tag
            put_u32(out, 2u);          // firmware minor
            put_u32(out, 11500 + static_cast<std::uint32_t>(rng.below(160))); // input voltage mV
            put_u32(out, 830 + static_cast<std::uint32_t>(rng.below(60)));    // current mA
            put_u32(out, 1u);                                                 // status ok
            for (int i = 0; i < 4; ++i)
                put_u16(out, static_cast<std::uint16_t>(360 + rng.below(25))); // temps x10
        } else {
            // measurement block: header, 16 channel returns, status footer
            put_u64(out, ts);
            ts += 100000 + rng.below(2000);
            put_u16(out, measurement_id);
            measurement_id = static_cast<std::uint16_t>((measurement_id + 1) % 2048);
            if (measurement_id == 0) ++frame_id;
            put_u16(out, frame_id);
            put_u32(out, static_cast<std::uint32_t>(measurement_id) * 44u);
            for (int ch = 0; ch < 16; ++ch) {
                range_walk =
                    static_cast<std::uint32_t>(std::max<std::int64_t>(
                        800, static_cast<std::int64_t>(range_walk) +
                                 static_cast<std::int64_t>(rng.below(1201)) - 600));
                put_u32(out, range_walk & 0xFFFFF);
                put_u16(out, static_cast<std::uint16_t>(rng.below(65536))); // signal photons
                put_u16(out, static_cast<std::uint16_t>(rng.below(4096))); // reflectivity+noise
            }
            put_u32(out, 0xFFFFFFFFu);
        }
    }
    out.resize(length);
    return Bytes(out.begin(), out.end());
}

Bytes document_binary(std::uint64_t seed, std::uint64_t length) {
    SplitMix64 rng(seed);
    std::string out;
    out.reserve(length + 8192);
    out += "%PDF-1.4\n%\xE2\xE3\xCF\xD3\n";
    std::uint32_t obj = 1;
    while (out.size() < length) {
        out += std::to_string(obj);
        out += " 0 obj\n";
        bool image_like = rng.below(5) < 2;
        std::size_t body_len = 2048 + rng.below(14336);
        if (image_like) {
            out += "<< /Type /XObject /Subtype /Image /Width ";
            out += std::to_string(64 + rng.below(1920));
            out += " /Height ";
            out += std::to_string(64 + rng.below(1080));
            out += " /BitsPerComponent 8 /ColorSpace /DeviceRGB /Filter /DCTDecode /Length ";
            out += std::to_string(body_len);
            out += " >>\nstream\n";
            // already-encoded image data: incompressible
            for (std::size_t i = 0; i < body_len; i += 8) {
                std::uint64_t v = rng.next();
                for (int b = 0; b < 8 && i + static_cast<std::size_t>(b) < body_len; ++b)
                    out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
            }
        } else {
            out += "<< /Length ";
            out += std::to_string(body_len);
            out += " >>\nstream\nBT\n/F1 11 Tf\n36 748 Td\n";
            std::size_t start = out.size();
            while (out.size() - start < body_len) {
                out += "(Section ";
                out += std::to_string(rng.below(90));
                out += '.';
                out += std::to_string(rng.below(90));
                out += " item ";
                out += std::to_string(rng.below(10000));
                out += " reading ";
                out += std::to_string(rng.below(100000));
                out += ") Tj 0 -14 Td\n";
            }
            out += "ET";
        }
        out += "\nendstream\nendobj\n";
        ++obj;
    }
    // xref stub; the emitter only targets structural plausibility
    out += "xref\n0 ";
    out += std::to_string(obj);
    out += "\ntrailer\n<< /Size ";
    out += std::to_string(obj);
    out += " /Root 1 0 R >>\nstartxref\n";
    out += std::to_string(out.size());
    out += "\n%%EOF\n";
    out.resize(length);
    return Bytes(out.begin(), out.end());
}

} // namespace cebench::corpus::gen
