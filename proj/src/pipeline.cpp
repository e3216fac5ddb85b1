#include "cebench/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <vector>

#include <fcntl.h>
#include <unistd.h>

#include "cebench/errors.hpp"

namespace cebench::pipeline {

using Clock = std::chrono::steady_clock;

std::string to_string(OrderMode order) {
    return order == OrderMode::compression_first ? "compression-first" : "encryption-first";
}

std::optional<OrderMode> parse_order_mode(std::string_view s) {
    if (s == "compression-first" || s == "CF" || s == "cf") return OrderMode::compression_first;
    if (s == "encryption-first" || s == "EF" || s == "ef") return OrderMode::encryption_first;
    return std::nullopt;
}

std::uint64_t total_time_ns(const TrialRecord& record) {
    return record.t_op1_ns + record.t_op2_ns + record.t_inv2_ns + record.t_inv1_ns;
}

namespace {

std::uint64_t ns_between(Clock::time_point a, Clock::time_point b) {
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(b - a).count());
}

/// Timed write + flush to stable storage; page-cache-only writes would make
/// the disk number meaningless.
std::uint64_t timed_disk_write(const std::filesystem::path& dir, const std::string& file_id,
                               BytesView payload) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) raise(errc::io, "cannot create " + dir.string());
    std::filesystem::path path = dir / (file_id + ".stage.tmp");
    auto t0 = Clock::now();
    int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (fd < 0) raise(errc::io, "cannot open " + path.string());
    std::size_t off = 0;
    while (off < payload.size()) {
        ssize_t n = ::write(fd, payload.data() + off, payload.size() - off);
        if (n < 0) {
            ::close(fd);
            raise(errc::io, "write failed for " + path.string());
        }
        off += static_cast<std::size_t>(n);
    }
    if (::fsync(fd) != 0) {
        ::close(fd);
        raise(errc::io, "fsync failed for " + path.string());
    }
    ::close(fd);
    auto t1 = Clock::now();
    std::filesystem::remove(path, ec);
    return ns_between(t0, t1);
}

} // namespace

namespace detail {

TrialRecord run_trial_hooked(const StageHooks& hooks, const PipelinePlan& plan, BytesView input,
                             const std::string& file_id, std::uint64_t trial_index) {
    if (input.empty()) raise(errc::invalid_input, "trial on empty input");

    TrialRecord record;
    record.file_id = file_id;
    record.order = plan.order;
    record.compress_alg = plan.compressor.id;
    record.encrypt_alg = plan.encryptor.id;
    record.trial_index = trial_index;
    record.size_original = input.size();

    auto t0 = Clock::now();
    Bytes intermediate = hooks.op1(input);
    auto t1 = Clock::now();
    Bytes final_encoded = hooks.op2(as_view(intermediate));
    auto t2 = Clock::now();

    record.t_op1_ns = ns_between(t0, t1);
    record.t_op2_ns = ns_between(t1, t2);
    record.size_intermediate = intermediate.size();
    record.size_final = final_encoded.size();

    if (plan.write_to_disk) {
        record.t_disk_ns = timed_disk_write(plan.disk_dir, file_id, as_view(final_encoded));
    }

    auto t3 = Clock::now();
    Bytes recovered_intermediate = hooks.inv2(as_view(final_encoded));
    auto t4 = Clock::now();
    Bytes recovered = hooks.inv1(as_view(recovered_intermediate));
    auto t5 = Clock::now();

    record.t_inv2_ns = ns_between(t3, t4);
    record.t_inv1_ns = ns_between(t4, t5);

    if (recovered.size() != input.size() ||
        std::memcmp(recovered.data(), input.data(), input.size()) != 0) {
        raise(errc::corruption, "round trip mismatch for " + file_id + " (" +
                                    to_string(plan.order) + ", " +
                                    stages::to_string(plan.compressor.id) + "+" +
                                    stages::to_string(plan.encryptor.id) + ")");
    }
    record.verified = true;
    return record;
}

} // namespace detail

TrialRecord run_trial(const PipelinePlan& plan, BytesView input, const std::string& file_id,
                      std::uint64_t trial_index, std::optional<std::uint64_t> nonce_index) {
    if (plan.compressor.kind != stages::StageKind::compress ||
        plan.encryptor.kind != stages::StageKind::encrypt) {
        raise(errc::config, "plan stage kinds do not match their roles");
    }
    std::uint64_t nidx = nonce_index.value_or(trial_index);

    auto compress_fwd = [&plan, nidx](BytesView data) {
        return stages::forward(plan.compressor, nullptr, data, nidx);
    };
    auto compress_inv = [&plan](BytesView data) {
        return stages::inverse(plan.compressor, nullptr, data);
    };
    auto encrypt_fwd = [&plan, nidx](BytesView data) {
        return stages::forward(plan.encryptor, &plan.key, data, nidx);
    };
    auto encrypt_inv = [&plan](BytesView data) {
        return stages::inverse(plan.encryptor, &plan.key, data);
    };

    detail::StageHooks hooks;
    if (plan.order == OrderMode::compression_first) {
        hooks.op1 = compress_fwd;
        hooks.op2 = encrypt_fwd;
        hooks.inv2 = encrypt_inv;
        hooks.inv1 = compress_inv;
    } else {
        hooks.op1 = encrypt_fwd;
        hooks.op2 = compress_fwd;
        hooks.inv2 = compress_inv;
        hooks.inv1 = encrypt_inv;
    }
    return detail::run_trial_hooked(hooks, plan, input, file_id, trial_index);
}

std::uint64_t timer_overhead_estimate_ns(std::size_t samples) {
    samples = std::max<std::size_t>(samples, 100000);
    std::vector<std::uint64_t> costs(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        auto a = Clock::now();
        auto b = Clock::now();
        costs[i] = ns_between(a, b);
    }
    auto mid = costs.begin() + static_cast<std::ptrdiff_t>(costs.size() / 2);
    std::nth_element(costs.begin(), mid, costs.end());
    return *mid;
}

} // namespace cebench::pipeline
