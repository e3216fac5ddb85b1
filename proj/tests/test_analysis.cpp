#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "cebench/analysis.hpp"
#include "cebench/errors.hpp"
#include "cebench/rng.hpp"

using namespace cebench;
using namespace cebench::analysis;
using pipeline::OrderMode;
using pipeline::TrialRecord;
using stages::AlgorithmId;

namespace {

// Brute-force statistics oracle, written independently of aggregate():
// two-pass mean/stddev over long doubles, percentiles straight off the
// sorted data by nearest rank.
struct OracleStats {
    double mean, median, stddev, p5, p95, min, max, trimmed;
};

OracleStats oracle(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    long double sum = 0;
    for (double x : v) sum += x;
    long double mean = sum / static_cast<long double>(n);
    long double sq = 0;
    for (double x : v) sq += (static_cast<long double>(x) - mean) * (static_cast<long double>(x) - mean);
    double stddev = n > 1 ? static_cast<double>(std::sqrt(sq / static_cast<long double>(n - 1))) : 0.0;

    auto nearest_rank = [&](double q) {
        std::size_t r = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
        if (r == 0) r = 1;
        return v[r - 1];
    };
    double median = n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;

    std::size_t k = n / 20;
    long double tsum = 0;
    for (std::size_t i = k; i < n - k; ++i) tsum += v[i];
    double trimmed = static_cast<double>(tsum / static_cast<long double>(n - 2 * k));

    return {static_cast<double>(mean), median, stddev, nearest_rank(0.05), nearest_rank(0.95),
            v.front(), v.back(), trimmed};
}

TrialRecord make_record(const std::string& file, AlgorithmId comp, AlgorithmId enc,
                        OrderMode order, double total_ms, std::uint64_t size_original,
                        std::uint64_t size_final, std::uint64_t trial = 0) {
    TrialRecord r;
    r.file_id = file;
    r.compress_alg = comp;
    r.encrypt_alg = enc;
    r.order = order;
    r.trial_index = trial;
    r.t_op1_ns = static_cast<std::uint64_t>(total_ms * 1e6 / 4);
    r.t_op2_ns = static_cast<std::uint64_t>(total_ms * 1e6 / 4);
    r.t_inv2_ns = static_cast<std::uint64_t>(total_ms * 1e6 / 4);
    r.t_inv1_ns = static_cast<std::uint64_t>(total_ms * 1e6) -
                  3 * static_cast<std::uint64_t>(total_ms * 1e6 / 4);
    r.size_original = size_original;
    r.size_intermediate = size_final;
    r.size_final = size_final;
    r.verified = true;
    return r;
}

} // namespace

TEST_CASE("aggregate matches the brute-force oracle on 1000 random datasets") {
    SplitMix64 rng(2024);
    for (int dataset = 0; dataset < 1000; ++dataset) {
        std::size_t n = 1 + rng.below(400);
        std::vector<double> values(n);
        for (double& v : values) {
            v = static_cast<double>(rng.below(1'000'000'000)) / 1e3 - 250000.0;
        }
        AggregateStats got = aggregate(values);
        OracleStats want = oracle(values);

        REQUIRE(got.n == n);
        CHECK(got.median == want.median);
        CHECK(got.p5 == want.p5);
        CHECK(got.p95 == want.p95);
        CHECK(got.min == want.min);
        CHECK(got.max == want.max);
        CHECK(got.mean == doctest::Approx(want.mean).epsilon(1e-12));
        if (want.stddev > 0) {
            CHECK(got.stddev == doctest::Approx(want.stddev).epsilon(1e-12));
        }
        CHECK(got.trimmed_mean == doctest::Approx(want.trimmed).epsilon(1e-12));

        CHECK(got.min <= got.p5);
        CHECK(got.p5 <= got.median);
        CHECK(got.median <= got.p95);
        CHECK(got.p95 <= got.max);
    }
}

TEST_CASE("aggregate handles the tiny fixed examples") {
    std::vector<double> three = {1, 2, 3};
    AggregateStats s = aggregate(three);
    CHECK(s.mean == 2.0);
    CHECK(s.median == 2.0);
    CHECK(s.min == 1.0);
    CHECK(s.max == 3.0);

    std::vector<double> one = {5};
    AggregateStats single = aggregate(one);
    CHECK(single.mean == 5.0);
    CHECK(single.median == 5.0);
    CHECK(single.p5 == 5.0);
    CHECK(single.p95 == 5.0);
    CHECK(single.stddev == 0.0);
    CHECK(single.trimmed_mean == 5.0);

    std::vector<double> none;
    CHECK_THROWS_AS(aggregate(none), Error);
}

TEST_CASE("compression ratio arithmetic and error path") {
    CHECK(compression_ratio(85, 85) == 1.0);
    CHECK(compression_ratio(50, 100) == 0.5);
    CHECK(compression_ratio(120, 100) > 1.0);
    CHECK_THROWS_AS(compression_ratio(50, 0), Error);
}

TEST_CASE("compare_orders finds the faster order by median and reports deltas") {
    std::vector<TrialRecord> records;
    for (int i = 0; i < 9; ++i) {
        records.push_back(make_record("f", AlgorithmId::gzip, AlgorithmId::aes,
                                      OrderMode::compression_first, 100 + i, 1000, 400, i));
        records.push_back(make_record("f", AlgorithmId::gzip, AlgorithmId::aes,
                                      OrderMode::encryption_first, 50 + i, 1000, 1100, i));
    }
    auto comparisons = compare_orders(records);
    REQUIRE(comparisons.size() == 1);
    const OrderComparison& c = comparisons[0];
    CHECK(c.faster_order == OrderMode::encryption_first);
    CHECK(c.cf_stats.median == 104.0);
    CHECK(c.ef_stats.median == 54.0);
    CHECK(c.time_delta_pct == doctest::Approx((54.0 - 104.0) / 104.0 * 100));
    CHECK(c.cf_ratio == doctest::Approx(0.4));
    CHECK(c.ef_ratio == doctest::Approx(1.1));
}

TEST_CASE("identical distributions tie at zero delta, CF by convention") {
    std::vector<TrialRecord> records;
    for (int i = 0; i < 5; ++i) {
        for (OrderMode order : {OrderMode::compression_first, OrderMode::encryption_first}) {
            records.push_back(make_record("f", AlgorithmId::lzma, AlgorithmId::fernet, order,
                                          10 + i, 1000, 500, i));
        }
    }
    auto comparisons = compare_orders(records);
    REQUIRE(comparisons.size() == 1);
    CHECK(comparisons[0].time_delta_pct == 0.0);
    CHECK(comparisons[0].faster_order == OrderMode::compression_first);
}

TEST_CASE("compare_orders demands both orders per group") {
    std::vector<TrialRecord> records = {make_record("f", AlgorithmId::gzip, AlgorithmId::aes,
                                                    OrderMode::compression_first, 10, 100, 50)};
    try {
        compare_orders(records);
        FAIL("half a grid accepted");
    } catch (const Error& e) {
        CHECK(e.code() == errc::incomplete_grid);
    }
}

TEST_CASE("feasibility applies the strict budget boundary") {
    NetworkModel network{NetworkModel::Kind::static_latency, 50.0};
    std::vector<TrialRecord> records = {
        make_record("ok", AlgorithmId::gzip, AlgorithmId::aes, OrderMode::compression_first, 49.0,
                    1000, 400, 0),
        make_record("late", AlgorithmId::gzip, AlgorithmId::aes, OrderMode::compression_first,
                    51.0, 1000, 400, 0),
    };
    auto reports = feasibility(records, network, 100.0);
    REQUIRE(reports.size() == 2);
    for (const auto& rep : reports) {
        if (rep.file_id == "ok") CHECK(rep.fraction_real_time == 1.0);   // 99 < 100
        if (rep.file_id == "late") CHECK(rep.fraction_real_time == 0.0); // 101 >= 100
    }
    CHECK_THROWS_AS(feasibility(records, network, 0.0), Error);
}

TEST_CASE("feasibility can fold measured disk time into the delay") {
    NetworkModel network{NetworkModel::Kind::static_latency, 50.0};
    TrialRecord r = make_record("f", AlgorithmId::gzip, AlgorithmId::aes,
                                OrderMode::compression_first, 45.0, 1000, 400, 0);
    r.t_disk_ns = 20'000'000; // 20 ms: pushes 95 ms over the line
    std::vector<TrialRecord> records = {r};
    CHECK(feasibility(records, network, 100.0)[0].fraction_real_time == 1.0);
    CHECK(feasibility(records, network, 100.0, true)[0].fraction_real_time == 0.0);
}

TEST_CASE("feasibility fractions are monotone in latency and budget") {
    SplitMix64 rng(77);
    std::vector<TrialRecord> records;
    for (int i = 0; i < 200; ++i) {
        records.push_back(make_record("f", AlgorithmId::gzip, AlgorithmId::aes,
                                      OrderMode::compression_first,
                                      static_cast<double>(rng.below(120)), 1000, 900, i));
    }
    auto fraction = [&](double latency, double budget) {
        NetworkModel n{NetworkModel::Kind::static_latency, latency};
        return feasibility(records, n, budget)[0].fraction_real_time;
    };
    double prev = 1.1;
    for (double latency : {0.0, 10.0, 30.0, 50.0, 80.0}) {
        double f = fraction(latency, 100.0);
        CHECK(f <= prev);
        prev = f;
    }
    prev = -0.1;
    for (double budget : {20.0, 60.0, 100.0, 200.0}) {
        double f = fraction(50.0, budget);
        CHECK(f >= prev);
        prev = f;
    }
}

TEST_CASE("fastest pair selection and tie-breaks") {
    std::vector<TrialRecord> records;
    // slow pair
    for (int i = 0; i < 5; ++i) {
        records.push_back(make_record("f", AlgorithmId::bzip2, AlgorithmId::fernet,
                                      OrderMode::compression_first, 80, 1000, 300, i));
    }
    // two fast pairs with equal medians, different final sizes
    for (int i = 0; i < 5; ++i) {
        records.push_back(make_record("f", AlgorithmId::gzip, AlgorithmId::aes,
                                      OrderMode::compression_first, 20, 1000, 450, i));
        records.push_back(make_record("f", AlgorithmId::zip_container, AlgorithmId::aes,
                                      OrderMode::compression_first, 20, 1000, 440, i));
    }
    FastestPair fast = fastest_pair(records, 0, 1'000'000);
    CHECK(fast.pair.compressor == AlgorithmId::zip_container); // smaller size_final wins the tie
    CHECK(fast.median_total_ms == 20.0);

    SUBCASE("single pair returns itself") {
        std::vector<TrialRecord> solo = {make_record("f", AlgorithmId::lzma, AlgorithmId::xsalsa20,
                                                     OrderMode::encryption_first, 33, 100, 120)};
        FastestPair only = fastest_pair(solo, 0, 1'000'000);
        CHECK(only.pair.compressor == AlgorithmId::lzma);
        CHECK(only.order == OrderMode::encryption_first);
    }

    SUBCASE("argmin is invariant under positive scaling") {
        std::vector<TrialRecord> scaled;
        for (const auto& r : records) {
            TrialRecord s = r;
            s.t_op1_ns *= 7;
            s.t_op2_ns *= 7;
            s.t_inv2_ns *= 7;
            s.t_inv1_ns *= 7;
            scaled.push_back(s);
        }
        FastestPair fast_scaled = fastest_pair(scaled, 0, 1'000'000);
        CHECK(fast_scaled.pair.compressor == fast.pair.compressor);
        CHECK(fast_scaled.pair.encryptor == fast.pair.encryptor);
        CHECK(fast_scaled.order == fast.order);
    }

    SUBCASE("empty class is an error") {
        CHECK_THROWS_AS(fastest_pair(records, 5'000'000, 10'000'000), Error);
    }
}

TEST_CASE("size classes split at the decimal megabyte boundaries") {
    CHECK(size_class_of(999'999).name == std::string("lt-1mb"));
    CHECK(size_class_of(1'000'000).name == std::string("1mb-10mb"));
    CHECK(size_class_of(9'999'999).name == std::string("1mb-10mb"));
    CHECK(size_class_of(10'000'000).name == std::string("ge-10mb"));
    CHECK(size_class_of(101'128'023).name == std::string("ge-10mb"));
}

TEST_CASE("class summaries report both denominators") {
    std::vector<TrialRecord> records;
    for (int i = 0; i < 10; ++i) {
        // 40ms + 50 latency: meets 100ms budget
        records.push_back(make_record("small", AlgorithmId::gzip, AlgorithmId::aes,
                                      OrderMode::encryption_first, 40, 5000, 5100, i));
        // straddles: half the trials at 45ms (meets), half at 55 (fails)
        records.push_back(make_record("mid", AlgorithmId::gzip, AlgorithmId::aes,
                                      OrderMode::encryption_first, i < 5 ? 45 : 55, 2'000'000,
                                      2'100'000, i));
    }
    NetworkModel network{NetworkModel::Kind::static_latency, 50.0};
    auto classes = summarize_classes(records, network, 100.0);
    REQUIRE(classes.size() == 2);
    CHECK(classes[0].class_name == "lt-1mb");
    CHECK(classes[0].fraction_trials_fastest_pair == 1.0);
    CHECK(classes[1].class_name == "1mb-10mb");
    CHECK(classes[1].fraction_trials_fastest_pair == 0.5);
    // the cell median (45/55 midpoint = 50 -> 100 not < 100) fails the budget
    CHECK(classes[1].fraction_cells_meeting == 0.0);
}

TEST_CASE("feasibility flags the class-fastest pair rows") {
    std::vector<TrialRecord> records;
    for (int i = 0; i < 4; ++i) {
        records.push_back(make_record("f", AlgorithmId::gzip, AlgorithmId::aes,
                                      OrderMode::encryption_first, 10, 1000, 1100, i));
        records.push_back(make_record("f", AlgorithmId::bzip2, AlgorithmId::aes,
                                      OrderMode::compression_first, 90, 1000, 500, i));
    }
    NetworkModel network{NetworkModel::Kind::static_latency, 50.0};
    auto reports = feasibility(records, network, 100.0);
    REQUIRE(reports.size() == 2);
    for (const auto& rep : reports) {
        bool is_fast = rep.pair.compressor == AlgorithmId::gzip;
        CHECK(rep.fastest_pair_flag == is_fast);
    }
}
