#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <map>
#include <set>

#include "cebench/corpus.hpp"
#include "cebench/errors.hpp"
#include "cebench/records_io.hpp"
#include "cebench/runner.hpp"

using namespace cebench;
using namespace cebench::runner;
using stages::AlgorithmId;

namespace {

std::filesystem::path make_tiny_corpus(const char* name) {
    auto dir = std::filesystem::temp_directory_path() / "cebench-tests" / name;
    std::filesystem::remove_all(dir);
    std::vector<corpus::Profile> profiles = {
        {"mini-csv", 280, corpus::ContentClass::structured_csv, "vehicle-gps"},
        {"mini-packet", 512, corpus::ContentClass::binary_packet, "ouster-lidar"},
    };
    corpus::write_corpus(corpus::generate_corpus(3, profiles), dir);
    return dir;
}

corpus::CorpusManifest fake_manifest(std::vector<std::pair<std::string, std::uint64_t>> files) {
    corpus::CorpusManifest manifest;
    manifest.seed = 1;
    for (auto& [id, size] : files) {
        corpus::FileSpec spec;
        spec.id = id;
        spec.byte_length = size;
        manifest.entries.push_back(spec);
    }
    return manifest;
}

RunConfig tiny_config(const std::filesystem::path& corpus_dir) {
    RunConfig config = default_config();
    config.seed = 5;
    config.corpus_dir = corpus_dir;
    config.compressors = {AlgorithmId::gzip};
    config.encryptors = {AlgorithmId::xsalsa20};
    config.reps_small = 4;
    config.warmup_trials = 2;
    return config;
}

} // namespace

TEST_CASE("default grid over one file is the full 4x3x2 cross product") {
    RunConfig config = default_config();
    auto cells = plan(config, fake_manifest({{"one", 1000}}));
    CHECK(cells.size() == 24);

    // deterministic ordering: compressor-major, then encryptor, then order
    CHECK(cells[0].plan.compressor.id == AlgorithmId::bzip2);
    CHECK(cells[0].plan.encryptor.id == AlgorithmId::aes);
    CHECK(cells[0].plan.order == pipeline::OrderMode::compression_first);
    CHECK(cells[1].plan.order == pipeline::OrderMode::encryption_first);
    CHECK(cells[23].plan.compressor.id == AlgorithmId::zip_container);
    CHECK(cells[23].plan.encryptor.id == AlgorithmId::xsalsa20);
}

TEST_CASE("repetition rule: 32 at or above the 10MB threshold, 100 below") {
    RunConfig config = default_config();
    auto cells = plan(config, fake_manifest({{"big", 10239975}, {"small", 5052}}));
    for (const auto& cell : cells) {
        if (cell.file.id == "big") CHECK(cell.repetitions == 32);
        if (cell.file.id == "small") CHECK(cell.repetitions == 100);
    }
    // threshold boundary is >= 10^7
    auto edge = plan(config, fake_manifest({{"edge", 10'000'000}, {"under", 9'999'999}}));
    for (const auto& cell : edge) {
        if (cell.file.id == "edge") CHECK(cell.repetitions == 32);
        if (cell.file.id == "under") CHECK(cell.repetitions == 100);
    }
}

TEST_CASE("planning is deterministic including key material") {
    RunConfig config = default_config();
    auto manifest = fake_manifest({{"a", 100}, {"b", 200}});
    auto first = plan(config, manifest);
    auto second = plan(config, manifest);
    REQUIRE(first.size() == second.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
        CHECK(first[i].file.id == second[i].file.id);
        CHECK(first[i].plan.key.key == second[i].plan.key.key);
        CHECK(first[i].cell_ordinal == i);
    }
}

TEST_CASE("config validation rejects empty and ill-kinded grids") {
    auto manifest = fake_manifest({{"a", 100}});
    RunConfig config = default_config();
    config.compressors.clear();
    CHECK_THROWS_AS(plan(config, manifest), Error);

    config = default_config();
    config.encryptors = {AlgorithmId::gzip}; // wrong kind
    CHECK_THROWS_AS(plan(config, manifest), Error);

    config = default_config();
    config.reps_small = 0;
    CHECK_THROWS_AS(plan(config, manifest), Error);

    config = default_config();
    CHECK_THROWS_AS(plan(config, fake_manifest({})), Error);

    config = default_config();
    config.file_ids = {"not-there"};
    CHECK_THROWS_AS(plan(config, manifest), Error);
}

TEST_CASE("execute runs warmups unrecorded and numbers trials from zero") {
    auto dir = make_tiny_corpus("exec");
    RunConfig config = tiny_config(dir);

    RunResult result = execute(config);
    // 2 files x 1 compressor x 1 encryptor x 2 orders x 4 reps
    CHECK(result.records.size() == 16);
    CHECK(result.usable);
    CHECK(result.environment.cpu_model != "");
    CHECK(result.environment.timer_overhead_ns < 100000);

    std::map<std::string, std::vector<std::uint64_t>> by_cell;
    for (const auto& r : result.records) {
        CHECK(r.verified);
        by_cell[r.file_id + "/" + pipeline::to_string(r.order)].push_back(r.trial_index);
    }
    for (auto& [cell, indices] : by_cell) {
        REQUIRE(indices.size() == 4);
        for (std::uint64_t i = 0; i < indices.size(); ++i) CHECK(indices[i] == i);
    }
}

TEST_CASE("no (key, nonce) pair repeats across a run's plan") {
    RunConfig config = default_config();
    config.seed = 9;
    config.reps_small = 6;
    config.warmup_trials = 2;
    auto cells = plan(config, fake_manifest({{"a", 100}, {"b", 5000}, {"c", 20'000'000}}));

    std::set<std::pair<Bytes, Bytes>> seen;
    for (const auto& cell : cells) {
        std::uint32_t reps = cell.repetitions;
        // counted trials use nonce indices [0, reps); warmups sit past them
        for (std::uint64_t idx = 0; idx < reps + config.warmup_trials; ++idx) {
            auto pair = std::make_pair(cell.plan.key.key,
                                       stages::derive_nonce(cell.plan.key, idx));
            CHECK(seen.insert(pair).second);
        }
    }
}

TEST_CASE("file_ids narrows the grid") {
    auto dir = make_tiny_corpus("filter");
    RunConfig config = tiny_config(dir);
    config.file_ids = {"mini-packet"};
    RunResult result = execute(config);
    CHECK(result.records.size() == 8);
    for (const auto& r : result.records) CHECK(r.file_id == "mini-packet");
}

TEST_CASE("resume completes exactly the missing trials") {
    auto dir = make_tiny_corpus("resume");
    RunConfig config = tiny_config(dir);
    RunResult full = execute(config);

    // idempotent on a complete result
    RunResult again = resume(full, config);
    CHECK(again.records.size() == full.records.size());

    // drop one cell's records plus half of another's
    RunResult partial = full;
    std::vector<pipeline::TrialRecord> kept;
    int dropped_tail = 0;
    for (const auto& r : partial.records) {
        if (r.file_id == "mini-csv" && r.order == pipeline::OrderMode::compression_first) continue;
        if (r.file_id == "mini-packet" && r.order == pipeline::OrderMode::encryption_first &&
            r.trial_index >= 2) {
            ++dropped_tail;
            continue;
        }
        kept.push_back(r);
    }
    REQUIRE(dropped_tail == 2);
    partial.records = kept;

    RunResult completed = resume(partial, config);
    CHECK(completed.records.size() == full.records.size());
    std::map<std::string, std::set<std::uint64_t>> by_cell;
    for (const auto& r : completed.records) {
        by_cell[r.file_id + "/" + pipeline::to_string(r.order)].insert(r.trial_index);
    }
    for (auto& [cell, indices] : by_cell) {
        CHECK(indices == std::set<std::uint64_t>{0, 1, 2, 3});
    }

    // a different seed is a different experiment
    RunConfig other = config;
    other.seed = 999;
    try {
        resume(full, other);
        FAIL("seed mismatch accepted");
    } catch (const Error& e) {
        CHECK(e.code() == errc::resume_mismatch);
    }
}

TEST_CASE("config hash tracks grid-shaping fields only") {
    RunConfig a = default_config();
    a.seed = 1;
    RunConfig b = a;
    CHECK(config_hash(a) == config_hash(b));
    b.reps_large = 33;
    CHECK(config_hash(a) != config_hash(b));
    b = a;
    b.corpus_dir = "/somewhere/else"; // location does not shape the grid
    CHECK(config_hash(a) == config_hash(b));
}

TEST_CASE("missing corpus directory raises an io error") {
    RunConfig config = tiny_config("/nonexistent/corpus-dir");
    try {
        execute(config);
        FAIL("missing corpus accepted");
    } catch (const Error& e) {
        CHECK(e.code() == errc::io);
    }
}

TEST_CASE("shuffle reorders cells deterministically without changing the set") {
    auto dir = make_tiny_corpus("shuffle");
    RunConfig config = tiny_config(dir);
    config.shuffle = true;
    RunResult result = execute(config);
    CHECK(result.records.size() == 16);
    std::set<std::string> cells;
    for (const auto& r : result.records) {
        cells.insert(r.file_id + "/" + pipeline::to_string(r.order));
    }
    CHECK(cells.size() == 4);
}
