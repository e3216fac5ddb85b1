#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cebench/analysis.hpp"
#include "cebench/corpus.hpp"
#include "cebench/pipeline.hpp"
#include "cebench/runner.hpp"

namespace cebench::io {

inline constexpr int kSchemaVersion = 1;

/// records.csv column order; fixed, schema-versioned via run_meta.json.
inline constexpr const char* kRecordsHeader =
    "file_id,order,compress_alg,encrypt_alg,trial_index,t_op1_ns,t_op2_ns,t_disk_ns,"
    "t_inv2_ns,t_inv1_ns,size_original,size_intermediate,size_final,verified";

std::string record_to_csv_row(const pipeline::TrialRecord& record);
pipeline::TrialRecord record_from_csv_row(const std::string& row);

std::string record_to_json(const pipeline::TrialRecord& record);
pipeline::TrialRecord record_from_json(const std::string& json_text);

void write_records_csv(const std::filesystem::path& path,
                       std::span<const pipeline::TrialRecord> records, bool append = false);
std::vector<pipeline::TrialRecord> read_records_csv(const std::filesystem::path& path);

std::string config_to_json(const runner::RunConfig& config);
runner::RunConfig config_from_json(const std::string& json_text);
runner::RunConfig read_config(const std::filesystem::path& path);

/// run_meta.json: config echo, environment, timestamps, config hash,
/// record count and the usable flag.
void write_run_meta(const std::filesystem::path& path, const runner::RunResult& result);
runner::RunResult read_run_meta(const std::filesystem::path& path);

/// Profiles manifest for gen-corpus: [{id, byte_length, content_class,
/// label?}, ...]. Parse errors carry line:column positions.
std::vector<corpus::Profile> profiles_from_json(const std::string& json_text);
std::vector<corpus::Profile> read_profiles(const std::filesystem::path& path);

void write_comparisons_csv(const std::filesystem::path& path,
                           std::span<const analysis::OrderComparison> comparisons);
void write_feasibility_csv(const std::filesystem::path& path,
                           std::span<const analysis::FeasibilityReport> reports);
std::string summary_to_json(std::span<const analysis::OrderComparison> comparisons,
                            std::span<const analysis::ClassSummary> classes,
                            const analysis::NetworkModel& network, double budget_ms);

} // namespace cebench::io
