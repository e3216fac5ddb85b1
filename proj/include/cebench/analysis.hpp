#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cebench/pipeline.hpp"
#include "cebench/stages.hpp"

namespace cebench::analysis {

struct AggregateStats {
    std::size_t n = 0;
    double mean = 0, median = 0, stddev = 0;
    double p5 = 0, p95 = 0, min = 0, max = 0;
    double trimmed_mean = 0; // 5% symmetric trim
};

/// Exact order statistics (nearest-rank percentiles, midpoint median),
/// sample standard deviation. Throws errc::empty_input on an empty span.
AggregateStats aggregate(std::span<const double> values);

/// size_final / size_original; < 1.0 means net reduction.
double compression_ratio(std::uint64_t size_final, std::uint64_t size_original);

struct PairKey {
    stages::AlgorithmId compressor{};
    stages::AlgorithmId encryptor{};
    auto operator<=>(const PairKey&) const = default;
};

struct OrderComparison {
    std::string file_id;
    PairKey pair;
    AggregateStats cf_stats; // total time, ms
    AggregateStats ef_stats;
    double cf_ratio = 0; // median final-size ratio
    double ef_ratio = 0;
    double time_delta_pct = 0; // (ef - cf) / cf * 100, on median total time
    pipeline::OrderMode faster_order = pipeline::OrderMode::compression_first;
};

/// Per (file, compressor, encryptor) CF/EF comparison; requires both orders
/// present for every group (errc::incomplete_grid otherwise).
std::vector<OrderComparison> compare_orders(std::span<const pipeline::TrialRecord> records);

struct NetworkModel {
    enum class Kind { static_latency };
    Kind kind = Kind::static_latency;
    double latency_ms = 50.0;
};

struct FeasibilityReport {
    std::string file_id;
    PairKey pair;
    pipeline::OrderMode order{};
    double budget_ms = 100.0;
    NetworkModel network;
    std::size_t n = 0;
    double fraction_real_time = 0; // #(total + latency < budget) / n
    bool fastest_pair_flag = false;
};

/// Budgeted delay per trial is total_time + static latency; a trial is
/// real-time iff that is strictly below the budget. fastest_pair_flag marks
/// rows whose (pair, order) is its size class's fastest. include_disk adds
/// the measured disk-write duration to each trial's delay.
std::vector<FeasibilityReport> feasibility(std::span<const pipeline::TrialRecord> records,
                                           const NetworkModel& network, double budget_ms,
                                           bool include_disk = false);

/// Size classes mirror the three reported regimes: <1MB, [1MB,10MB), >=10MB
/// (decimal megabytes).
struct SizeClass {
    std::uint64_t lo = 0;
    std::uint64_t hi = UINT64_MAX; // exclusive
    std::string name;
};

const std::vector<SizeClass>& size_classes();
const SizeClass& size_class_of(std::uint64_t byte_length);

struct FastestPair {
    PairKey pair;
    pipeline::OrderMode order{};
    double median_total_ms = 0;
    std::uint64_t median_size_final = 0;
};

/// Pair+order minimizing median total time over the records whose
/// size_original falls in [class_lo, class_hi). Ties break on smaller
/// median final size, then lexicographic algorithm ids.
FastestPair fastest_pair(std::span<const pipeline::TrialRecord> records, std::uint64_t class_lo,
                         std::uint64_t class_hi);

/// Class-level rollup. The real-time fraction is reported under both
/// denominators: trials of the fastest pair and (file,pair,order) cells
/// whose median budgeted delay meets the budget.
struct ClassSummary {
    std::string class_name;
    std::uint64_t class_lo = 0, class_hi = 0;
    std::size_t files = 0;
    FastestPair fastest;
    double fraction_trials_fastest_pair = 0;
    double fraction_cells_meeting = 0;
};

std::vector<ClassSummary> summarize_classes(std::span<const pipeline::TrialRecord> records,
                                            const NetworkModel& network, double budget_ms);

} // namespace cebench::analysis
