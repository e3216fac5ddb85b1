#include "cebench/runner.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cebench/digest.hpp"
#include "cebench/errors.hpp"
#include "cebench/rng.hpp"

namespace cebench::runner {

RunConfig default_config() {
    RunConfig config;
    config.compressors = {stages::AlgorithmId::bzip2, stages::AlgorithmId::gzip,
                          stages::AlgorithmId::lzma, stages::AlgorithmId::zip_container};
    config.encryptors = {stages::AlgorithmId::aes, stages::AlgorithmId::fernet,
                         stages::AlgorithmId::xsalsa20};
    config.orders = {pipeline::OrderMode::compression_first,
                     pipeline::OrderMode::encryption_first};
    return config;
}

static void validate(const RunConfig& config) {
    if (config.compressors.empty() || config.encryptors.empty() || config.orders.empty()) {
        raise(errc::config, "empty algorithm or order subset");
    }
    if (config.reps_small < 1 || config.reps_large < 1) raise(errc::config, "repetitions must be >= 1");
    if (config.size_threshold == 0) raise(errc::config, "size threshold must be positive");
    for (stages::AlgorithmId id : config.compressors) {
        if (stages::algorithm(id).kind != stages::StageKind::compress) {
            raise(errc::config, stages::to_string(id) + " is not a compressor");
        }
    }
    for (stages::AlgorithmId id : config.encryptors) {
        if (stages::algorithm(id).kind != stages::StageKind::encrypt) {
            raise(errc::config, stages::to_string(id) + " is not an encryptor");
        }
    }
}

std::vector<PlannedCell> plan(const RunConfig& config, const corpus::CorpusManifest& manifest) {
    validate(config);
    std::vector<corpus::FileSpec> files;
    for (const corpus::FileSpec& file : manifest.entries) {
        if (config.file_ids.empty() ||
            std::find(config.file_ids.begin(), config.file_ids.end(), file.id) !=
                config.file_ids.end()) {
            files.push_back(file);
        }
    }
    if (files.empty()) raise(errc::config, "no corpus entries selected");

    std::vector<PlannedCell> cells;
    std::uint64_t ordinal = 0;
    for (const corpus::FileSpec& file : files) {
        std::uint32_t reps =
            file.byte_length >= config.size_threshold ? config.reps_large : config.reps_small;
        for (stages::AlgorithmId comp : config.compressors) {
            for (stages::AlgorithmId enc : config.encryptors) {
                for (pipeline::OrderMode order : config.orders) {
                    PlannedCell cell;
                    cell.file = file;
                    cell.plan.order = order;
                    cell.plan.compressor = stages::algorithm(comp);
                    cell.plan.encryptor = stages::algorithm(enc);
                    // per-cell key material: nonces stay unique run-wide
                    cell.plan.key = stages::generate_key(cell.plan.encryptor,
                                                         mix_seed(config.seed, ordinal));
                    cell.plan.write_to_disk = config.write_to_disk;
                    cell.plan.disk_dir = config.corpus_dir / ".disk-stage";
                    cell.repetitions = reps;
                    cell.cell_ordinal = ordinal++;
                    cells.push_back(std::move(cell));
                }
            }
        }
    }
    return cells;
}

HostInfo probe_host() {
    HostInfo info;
    info.clock_source = "std::chrono::steady_clock (CLOCK_MONOTONIC)";
    std::ifstream cpuinfo("/proc/cpuinfo");
    std::string line;
    while (std::getline(cpuinfo, line)) {
        if (line.rfind("model name", 0) == 0) {
            std::size_t colon = line.find(':');
            if (colon != std::string::npos) {
                info.cpu_model = line.substr(colon + 2);
            }
            break;
        }
    }
    if (info.cpu_model.empty()) info.cpu_model = "unknown";
    info.timer_overhead_ns = pipeline::timer_overhead_estimate_ns();
    return info;
}

static std::string iso8601_now() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string config_hash(const RunConfig& config) {
    std::ostringstream canon;
    canon << "v1|seed=" << config.seed << "|files=";
    for (const std::string& id : config.file_ids) canon << id << ",";
    canon << "|comp=";
    for (auto id : config.compressors) canon << stages::to_string(id) << ",";
    canon << "|enc=";
    for (auto id : config.encryptors) canon << stages::to_string(id) << ",";
    canon << "|orders=";
    for (auto o : config.orders) canon << pipeline::to_string(o) << ",";
    canon << "|reps=" << config.reps_small << "/" << config.reps_large
          << "|threshold=" << config.size_threshold << "|warmup=" << config.warmup_trials
          << "|shuffle=" << config.shuffle << "|disk=" << config.write_to_disk;
    Digest256 d = sha256(as_view(std::string_view(canon.str())));
    return digest_hex(d);
}

namespace {

struct CellKey {
    std::string file_id;
    stages::AlgorithmId comp;
    stages::AlgorithmId enc;
    pipeline::OrderMode order;
    auto operator<=>(const CellKey&) const = default;
};

CellKey key_of(const PlannedCell& cell) {
    return {cell.file.id, cell.plan.compressor.id, cell.plan.encryptor.id, cell.plan.order};
}

/// Runs one cell's warmups and counted trials. `done` counted trials already
/// exist (resume); warmup nonce indices are offset past every counted trial
/// so a resumed cell never reuses a (key, nonce) pair.
void run_cell(const PlannedCell& cell, BytesView content, const RunConfig& config,
              std::uint32_t done, bool fresh, std::vector<pipeline::TrialRecord>& records,
              std::uint64_t& trials_done, std::uint64_t trials_total,
              const ProgressFn& progress) {
    std::uint64_t warmup_base = fresh ? 0 : cell.repetitions + config.warmup_trials;
    for (std::uint32_t w = 0; w < config.warmup_trials; ++w) {
        pipeline::run_trial(cell.plan, content, cell.file.id, w,
                            warmup_base + cell.repetitions + w);
    }
    for (std::uint32_t i = done; i < cell.repetitions; ++i) {
        records.push_back(pipeline::run_trial(cell.plan, content, cell.file.id, i, i));
        ++trials_done;
        if (progress) progress(cell, i + 1, trials_done, trials_total);
    }
}

} // namespace

RunResult execute(const RunConfig& config, const ProgressFn& progress, RunResult* partial_out) {
    corpus::CorpusManifest manifest = corpus::read_manifest(config.corpus_dir);
    std::vector<PlannedCell> cells = plan(config, manifest);
    if (config.shuffle) {
        SplitMix64 rng(mix_seed(config.seed, 0x5348554646ULL));
        for (std::size_t i = cells.size(); i > 1; --i) {
            std::swap(cells[i - 1], cells[rng.below(i)]);
        }
    }

    RunResult result;
    result.config = config;
    result.environment = probe_host();
    result.started_at = iso8601_now();

    std::uint64_t trials_total = 0;
    for (const PlannedCell& cell : cells) trials_total += cell.repetitions;

    std::map<std::string, Bytes> content_cache;
    auto content_of = [&](const corpus::FileSpec& file) -> BytesView {
        auto it = content_cache.find(file.id);
        if (it == content_cache.end()) {
            Bytes content = corpus::read_entry(config.corpus_dir, file);
            if (!corpus::verify(file, as_view(content))) {
                raise(errc::corruption, "corpus file " + file.id + " does not match manifest");
            }
            it = content_cache.emplace(file.id, std::move(content)).first;
        }
        return as_view(it->second);
    };

    std::uint64_t trials_done = 0;
    try {
        for (const PlannedCell& cell : cells) {
            run_cell(cell, content_of(cell.file), config, 0, true, result.records, trials_done,
                     trials_total, progress);
            // a file's cells are contiguous in manifest order; drop the cache
            // entry once no later cell needs it
            if (!config.shuffle) {
                bool last_use = &cell == &cells.back() || (&cell + 1)->file.id != cell.file.id;
                if (last_use) content_cache.erase(cell.file.id);
            }
        }
    } catch (const Error& e) {
        if (e.code() == errc::corruption) {
            result.usable = false;
            result.finished_at = iso8601_now();
            if (partial_out) *partial_out = result;
        }
        throw;
    }
    result.finished_at = iso8601_now();
    return result;
}

RunResult resume(RunResult partial, const RunConfig& config, const ProgressFn& progress) {
    if (config_hash(partial.config) != config_hash(config)) {
        raise(errc::resume_mismatch, "partial result was produced by a different configuration");
    }
    if (!partial.usable) {
        raise(errc::resume_mismatch, "partial result is flagged unusable (corruption abort)");
    }
    corpus::CorpusManifest manifest = corpus::read_manifest(config.corpus_dir);
    std::vector<PlannedCell> cells = plan(config, manifest);

    std::map<CellKey, std::uint32_t> have;
    for (const pipeline::TrialRecord& r : partial.records) {
        ++have[{r.file_id, r.compress_alg, r.encrypt_alg, r.order}];
    }

    std::uint64_t trials_total = 0, trials_done = 0;
    for (const PlannedCell& cell : cells) {
        trials_total += cell.repetitions;
        auto it = have.find(key_of(cell));
        if (it != have.end()) trials_done += std::min<std::uint64_t>(it->second, cell.repetitions);
    }
    if (trials_done == trials_total) return partial;

    for (const PlannedCell& cell : cells) {
        std::uint32_t done = 0;
        if (auto it = have.find(key_of(cell)); it != have.end()) done = it->second;
        if (done >= cell.repetitions) continue;
        Bytes content = corpus::read_entry(config.corpus_dir, cell.file);
        if (!corpus::verify(cell.file, as_view(content))) {
            raise(errc::corruption, "corpus file " + cell.file.id + " does not match manifest");
        }
        run_cell(cell, as_view(content), config, done, false, partial.records, trials_done,
                 trials_total, progress);
    }
    partial.finished_at = iso8601_now();
    return partial;
}

} // namespace cebench::runner
