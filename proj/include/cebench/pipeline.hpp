#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "cebench/bytes.hpp"
#include "cebench/stages.hpp"

namespace cebench::pipeline {

enum class OrderMode { compression_first, encryption_first };

std::string to_string(OrderMode order);
std::optional<OrderMode> parse_order_mode(std::string_view s);

/// One trial configuration: order, stage pair and key material. With
/// write_to_disk set, the final encoded buffer is written (and fsynced) to
/// disk_dir between the forward and inverse halves; that duration is
/// recorded but never counted into total time.
struct PipelinePlan {
    OrderMode order = OrderMode::compression_first;
    stages::AlgorithmSpec compressor;
    stages::AlgorithmSpec encryptor;
    stages::KeyMaterial key;
    bool write_to_disk = false;
    std::filesystem::path disk_dir;
};

struct TrialRecord {
    std::string file_id;
    OrderMode order = OrderMode::compression_first;
    stages::AlgorithmId compress_alg{};
    stages::AlgorithmId encrypt_alg{};
    std::uint64_t trial_index = 0;
    std::uint64_t t_op1_ns = 0;
    std::uint64_t t_op2_ns = 0;
    std::uint64_t t_disk_ns = 0;
    std::uint64_t t_inv2_ns = 0;
    std::uint64_t t_inv1_ns = 0;
    std::uint64_t size_original = 0;
    std::uint64_t size_intermediate = 0;
    std::uint64_t size_final = 0;
    bool verified = false;
};

/// Sum of the four operation durations; disk time excluded by definition.
std::uint64_t total_time_ns(const TrialRecord& record);

/// Executes op1 -> op2 -> [disk write] -> inv2 -> inv1 strictly in
/// sequence, timestamping each boundary with the monotonic clock. Throws
/// errc::corruption if the recovered bytes differ from the input; a record
/// is only ever returned with verified == true.
///
/// nonce_index feeds nonce derivation and defaults to trial_index; callers
/// running many cells with the same key pass a globally unique value so no
/// (key, nonce) pair repeats within a run.
TrialRecord run_trial(const PipelinePlan& plan, BytesView input, const std::string& file_id,
                      std::uint64_t trial_index,
                      std::optional<std::uint64_t> nonce_index = std::nullopt);

/// Median cost in ns of one back-to-back monotonic timestamp pair.
std::uint64_t timer_overhead_estimate_ns(std::size_t samples = 200000);

namespace detail {

/// Stage hooks let tests substitute broken stages to exercise the
/// corruption path; run_trial wires the real stages through this.
struct StageHooks {
    std::function<Bytes(BytesView)> op1, op2, inv2, inv1;
};

TrialRecord run_trial_hooked(const StageHooks& hooks, const PipelinePlan& plan, BytesView input,
                             const std::string& file_id, std::uint64_t trial_index);

} // namespace detail

} // namespace cebench::pipeline
