#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "cebench/corpus.hpp"
#include "cebench/pipeline.hpp"
#include "cebench/stages.hpp"

namespace cebench::runner {

struct RunConfig {
    std::uint64_t seed = 0;
    std::filesystem::path corpus_dir;
    std::vector<std::string> file_ids; // empty = every manifest entry
    std::vector<stages::AlgorithmId> compressors; // defaults to registry subset
    std::vector<stages::AlgorithmId> encryptors;
    std::vector<pipeline::OrderMode> orders;
    std::uint32_t reps_small = 100;
    std::uint32_t reps_large = 32;
    std::uint64_t size_threshold = 10'000'000; // decimal 10 MB
    std::uint32_t warmup_trials = 3;
    bool measurement_mode = true; // serial execution contract
    bool shuffle = false;         // seeded cell shuffle, interference studies only
    bool write_to_disk = false;
};

RunConfig default_config();

/// One grid cell: a corpus file, a fully keyed plan, and its repetition
/// count under the small/large rule.
struct PlannedCell {
    corpus::FileSpec file;
    pipeline::PipelinePlan plan;
    std::uint32_t repetitions = 0;
    std::uint64_t cell_ordinal = 0; // position in the canonical (unshuffled) grid
};

std::vector<PlannedCell> plan(const RunConfig& config, const corpus::CorpusManifest& manifest);

struct HostInfo {
    std::string cpu_model;
    std::string clock_source;
    std::uint64_t timer_overhead_ns = 0;
};

HostInfo probe_host();

struct RunResult {
    RunConfig config;
    HostInfo environment;
    std::string started_at;
    std::string finished_at;
    std::vector<pipeline::TrialRecord> records;
    bool usable = true; // false when a corruption abort left partial results
};

using ProgressFn = std::function<void(const PlannedCell& cell, std::uint32_t rep_done,
                                      std::uint64_t trials_done, std::uint64_t trials_total)>;

/// Runs the full grid: per cell, warmup_trials discarded trials then the
/// counted repetitions (trial_index restarts at 0 after warmup). Strictly
/// serial in measurement mode. A corruption error aborts and rethrows after
/// marking the partial result unusable via the `partial_out` pointer.
RunResult execute(const RunConfig& config, const ProgressFn& progress = {},
                  RunResult* partial_out = nullptr);

/// Completes missing grid cells of a partial result produced by the same
/// config (matched by config hash). Complete results pass through.
RunResult resume(RunResult partial, const RunConfig& config, const ProgressFn& progress = {});

/// Hash of every grid-shaping field; resume compatibility check.
std::string config_hash(const RunConfig& config);

} // namespace cebench::runner
