// cebench: measures how the order of compression and encryption affects
// timing and size across a file corpus, and judges real-time transmission
// feasibility against a latency budget.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cebench/analysis.hpp"
#include "cebench/corpus.hpp"
#include "cebench/errors.hpp"
#include "cebench/pipeline.hpp"
#include "cebench/records_io.hpp"
#include "cebench/runner.hpp"

namespace {

using namespace cebench;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCorruption = 3;
constexpr int kExitIo = 4;

int exit_code_for(errc code) {
    switch (code) {
    case errc::io: return kExitIo;
    case errc::corruption:
    case errc::integrity:
    case errc::authentication: return kExitCorruption;
    default: return kExitConfig;
    }
}

/// CEBENCH_OUT overrides any --out directory.
std::filesystem::path resolve_out(const std::string& out_flag) {
    if (const char* env = std::getenv("CEBENCH_OUT")) return env;
    return out_flag;
}

// rough single-thread throughputs (MB/s) for the ETA print; estimates only
double pair_cost_seconds(const runner::PlannedCell& cell) {
    auto comp_mbps = [](stages::AlgorithmId id) {
        switch (id) {
        case stages::AlgorithmId::lzma: return 1.2;
        case stages::AlgorithmId::bzip2: return 6.0;
        default: return 12.0; // gzip, zip
        }
    };
    double mb = static_cast<double>(cell.file.byte_length) / 1e6;
    double per_trial = mb / comp_mbps(cell.plan.compressor.id) // forward + inverse compress
                       + mb / 60.0                             // decompress
                       + mb / 120.0 * 2;                       // cipher both ways
    return per_trial * cell.repetitions;
}

int cmd_gen_corpus(std::uint64_t seed, const std::string& profiles_arg,
                   const std::string& out_flag) {
    std::vector<corpus::Profile> profiles;
    if (profiles_arg == "builtin:table2") {
        profiles = corpus::table2_profiles();
    } else {
        profiles = io::read_profiles(profiles_arg);
    }
    std::filesystem::path out = resolve_out(out_flag);
    corpus::GeneratedCorpus generated = corpus::generate_corpus(seed, profiles);
    corpus::write_corpus(generated, out);
    std::uint64_t total = 0;
    for (const auto& e : generated.manifest.entries) total += e.byte_length;
    std::printf("wrote %zu corpus files (%.1f MB) + manifest.json to %s\n",
                generated.manifest.entries.size(), static_cast<double>(total) / 1e6,
                out.string().c_str());
    return kExitOk;
}

int cmd_run(const std::string& config_path, const std::string& out_flag, bool resume_flag) {
    runner::RunConfig config = io::read_config(config_path);
    std::filesystem::path out = resolve_out(out_flag);
    std::filesystem::create_directories(out);
    std::filesystem::path records_path = out / "records.csv";
    std::filesystem::path meta_path = out / "run_meta.json";

    corpus::CorpusManifest manifest;
    try {
        manifest = corpus::read_manifest(config.corpus_dir);
    } catch (const Error& e) {
        std::fprintf(stderr, "%s\nhint: generate it first, e.g. "
                             "`cebench gen-corpus --seed %llu --profiles builtin:table2 --out %s`\n",
                     e.what(), static_cast<unsigned long long>(config.seed),
                     config.corpus_dir.string().c_str());
        return kExitIo;
    }

    std::vector<runner::PlannedCell> cells = runner::plan(config, manifest);
    std::uint64_t trials = 0;
    double eta_s = 0;
    for (const auto& cell : cells) {
        trials += cell.repetitions;
        eta_s += pair_cost_seconds(cell);
    }
    std::printf("grid: %zu cells, %llu trials (+%u warmups/cell), rough ETA %.0f min\n",
                cells.size(), static_cast<unsigned long long>(trials), config.warmup_trials,
                eta_s / 60.0);
    std::fflush(stdout);

    auto progress = [](const runner::PlannedCell& cell, std::uint32_t, std::uint64_t done,
                       std::uint64_t total) {
        if (done % 500 == 0 || done == total) {
            std::printf("  [%llu/%llu] %s %s %s+%s\n", static_cast<unsigned long long>(done),
                        static_cast<unsigned long long>(total), cell.file.id.c_str(),
                        pipeline::to_string(cell.plan.order).c_str(),
                        stages::to_string(cell.plan.compressor.id).c_str(),
                        stages::to_string(cell.plan.encryptor.id).c_str());
            std::fflush(stdout);
        }
    };

    runner::RunResult result;
    runner::RunResult partial;
    try {
        if (resume_flag && std::filesystem::exists(records_path) &&
            std::filesystem::exists(meta_path)) {
            runner::RunResult prior = io::read_run_meta(meta_path);
            prior.records = io::read_records_csv(records_path);
            result = runner::resume(std::move(prior), config, progress);
        } else {
            result = runner::execute(config, progress, &partial);
        }
    } catch (const Error& e) {
        if (e.code() == errc::corruption && !partial.records.empty()) {
            io::write_records_csv(records_path, partial.records);
            io::write_run_meta(meta_path, partial);
            std::fprintf(stderr, "%s\npartial results flagged unusable in %s\n", e.what(),
                         meta_path.string().c_str());
        } else {
            std::fprintf(stderr, "%s\n", e.what());
        }
        return exit_code_for(e.code());
    }

    io::write_records_csv(records_path, result.records);
    io::write_run_meta(meta_path, result);
    std::printf("recorded %zu trials -> %s (all verified)\n", result.records.size(),
                records_path.string().c_str());
    return kExitOk;
}

std::vector<pipeline::TrialRecord> load_records(const std::string& records_path) {
    std::vector<pipeline::TrialRecord> records = io::read_records_csv(records_path);
    for (const auto& r : records) {
        if (!r.verified) raise(errc::corruption, "unverified record in " + records_path);
    }
    return records;
}

int cmd_analyze(const std::string& records_path, const std::string& out_flag,
                const std::string& format, double latency_ms, double budget_ms,
                bool include_disk, bool with_feasibility, bool bundle) {
    std::vector<pipeline::TrialRecord> records = load_records(records_path);
    std::filesystem::path out = resolve_out(out_flag);
    std::filesystem::create_directories(out);

    analysis::NetworkModel network{analysis::NetworkModel::Kind::static_latency, latency_ms};
    std::vector<analysis::OrderComparison> comparisons = analysis::compare_orders(records);
    std::vector<analysis::ClassSummary> classes =
        analysis::summarize_classes(records, network, budget_ms);

    if (format == "csv" || bundle) {
        io::write_comparisons_csv(out / "comparisons.csv", comparisons);
    }
    if (with_feasibility || bundle) {
        std::vector<analysis::FeasibilityReport> reports =
            analysis::feasibility(records, network, budget_ms, include_disk);
        io::write_feasibility_csv(out / "feasibility.csv", reports);
    }
    std::ofstream summary(out / "summary.json", std::ios::trunc);
    summary << io::summary_to_json(comparisons, classes, network, budget_ms);

    if (bundle) {
        std::ofstream txt(out / "summary.txt", std::ios::trunc);
        txt << "cebench report\n==============\n\n";
        txt << "records: " << records.size() << "  budget: " << budget_ms
            << " ms  static latency: " << latency_ms << " ms\n\n";
        for (const auto& cls : classes) {
            txt << "size class " << cls.class_name << " (" << cls.files << " files)\n";
            txt << "  fastest pair: " << stages::to_string(cls.fastest.pair.compressor) << "+"
                << stages::to_string(cls.fastest.pair.encryptor) << " "
                << pipeline::to_string(cls.fastest.order)
                << " (median total " << cls.fastest.median_total_ms << " ms)\n";
            txt << "  real-time fraction (fastest pair trials): "
                << cls.fraction_trials_fastest_pair << "\n";
            txt << "  real-time fraction (all cells, median):   " << cls.fraction_cells_meeting
                << "\n\n";
        }
        std::size_t ef_faster = 0;
        for (const auto& c : comparisons) {
            if (c.faster_order == pipeline::OrderMode::encryption_first) ++ef_faster;
        }
        txt << "order comparison: EF faster in " << ef_faster << "/" << comparisons.size()
            << " (file,pair) groups\n";
    }
    std::printf("analysis written to %s\n", out.string().c_str());
    return kExitOk;
}

int cmd_validate(const std::string& corpus_dir, const std::string& records_path) {
    int rc = kExitOk;
    if (!corpus_dir.empty()) {
        corpus::CorpusManifest manifest = corpus::read_manifest(corpus_dir);
        for (const auto& spec : manifest.entries) {
            Bytes content = corpus::read_entry(corpus_dir, spec);
            if (!corpus::verify(spec, as_view(content))) {
                std::fprintf(stderr, "corpus entry %s does not match its manifest checksum\n",
                             spec.id.c_str());
                rc = kExitCorruption;
            }
        }
        if (rc == kExitOk) {
            std::printf("corpus ok: %zu entries verified\n", manifest.entries.size());
        }
    }
    if (!records_path.empty()) {
        std::vector<pipeline::TrialRecord> records = load_records(records_path);
        std::printf("records ok: %zu rows, schema valid, all verified\n", records.size());
    }
    return rc;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"compression/encryption order benchmark harness"};
    app.require_subcommand(1);

    // gen-corpus
    auto* gen = app.add_subcommand("gen-corpus", "generate the test-file corpus");
    std::uint64_t seed = 7;
    std::string profiles_arg = "builtin:table2";
    std::string gen_out = "corpus";
    gen->add_option("--seed", seed, "corpus generation seed");
    gen->add_option("--profiles", profiles_arg, "profiles JSON path or builtin:table2");
    gen->add_option("--out", gen_out, "output directory");

    // run
    auto* run = app.add_subcommand("run", "execute the benchmark grid");
    std::string config_path;
    std::string run_out = "results";
    bool resume_flag = false;
    run->add_option("--config", config_path, "run configuration JSON")->required();
    run->add_option("--out", run_out, "output directory");
    run->add_flag("--resume", resume_flag, "complete a partial run in place");

    // analyze / feasibility / report
    std::string records_path = "results/records.csv";
    std::string an_out = "analysis";
    std::string format = "csv";
    double latency_ms = 50.0;
    double budget_ms = 100.0;
    bool include_disk = false;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--records", records_path, "records.csv from a run");
        cmd->add_option("--out", an_out, "output directory");
        cmd->add_option("--latency-ms", latency_ms, "static network latency");
        cmd->add_option("--budget-ms", budget_ms, "real-time budget");
        cmd->add_flag("--include-disk", include_disk,
                      "count measured disk-write time into the budgeted delay");
        cmd->add_option("--format", format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
    };
    auto* analyze = app.add_subcommand("analyze", "order comparisons and summary");
    add_common(analyze);
    auto* feas = app.add_subcommand("feasibility", "real-time feasibility fractions");
    add_common(feas);
    auto* report = app.add_subcommand("report", "full bundle with human-readable summary");
    add_common(report);

    // validate
    auto* validate = app.add_subcommand("validate", "verify corpus and/or records integrity");
    std::string v_corpus, v_records;
    validate->add_option("--corpus", v_corpus, "corpus directory");
    validate->add_option("--records", v_records, "records.csv path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen_corpus(seed, profiles_arg, gen_out);
        if (run->parsed()) return cmd_run(config_path, run_out, resume_flag);
        if (analyze->parsed()) {
            return cmd_analyze(records_path, an_out, format, latency_ms, budget_ms, include_disk,
                               false, false);
        }
        if (feas->parsed()) {
            return cmd_analyze(records_path, an_out, format, latency_ms, budget_ms, include_disk,
                               true, false);
        }
        if (report->parsed()) {
            return cmd_analyze(records_path, an_out, format, latency_ms, budget_ms, include_disk,
                               true, true);
        }
        if (validate->parsed()) return cmd_validate(v_corpus, v_records);
    } catch (const Error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    }
    return kExitOk;
}
