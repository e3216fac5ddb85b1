#include "cebench/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "cebench/errors.hpp"

namespace cebench::analysis {

AggregateStats aggregate(std::span<const double> values) {
    if (values.empty()) raise(errc::empty_input, "aggregate over empty data");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    std::size_t n = sorted.size();

    AggregateStats s;
    s.n = n;
    s.min = sorted.front();
    s.max = sorted.back();

    double sum = 0;
    for (double v : sorted) sum += v;
    s.mean = sum / static_cast<double>(n);

    s.median = n % 2 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;

    // nearest-rank percentiles
    auto rank = [&](double q) {
        std::size_t idx = static_cast<std::size_t>(
            std::ceil(q * static_cast<double>(n)));
        return sorted[idx == 0 ? 0 : idx - 1];
    };
    s.p5 = rank(0.05);
    s.p95 = rank(0.95);

    if (n > 1) {
        double sq = 0;
        for (double v : sorted) sq += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(sq / static_cast<double>(n - 1));
    }

    std::size_t trim = n / 20; // 5% from each end
    double tsum = 0;
    for (std::size_t i = trim; i < n - trim; ++i) tsum += sorted[i];
    s.trimmed_mean = tsum / static_cast<double>(n - 2 * trim);
    return s;
}

double compression_ratio(std::uint64_t size_final, std::uint64_t size_original) {
    if (size_original == 0) raise(errc::invalid_input, "zero original size");
    return static_cast<double>(size_final) / static_cast<double>(size_original);
}

namespace {

double total_ms(const pipeline::TrialRecord& r) {
    return static_cast<double>(pipeline::total_time_ns(r)) / 1e6;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

struct GroupKey {
    std::string file_id;
    PairKey pair;
    auto operator<=>(const GroupKey&) const = default;
};

} // namespace

std::vector<OrderComparison> compare_orders(std::span<const pipeline::TrialRecord> records) {
    struct Group {
        std::vector<double> cf_ms, ef_ms;
        std::vector<double> cf_ratio, ef_ratio;
    };
    std::map<GroupKey, Group> groups;
    for (const pipeline::TrialRecord& r : records) {
        Group& g = groups[{r.file_id, {r.compress_alg, r.encrypt_alg}}];
        double ratio = compression_ratio(r.size_final, r.size_original);
        if (r.order == pipeline::OrderMode::compression_first) {
            g.cf_ms.push_back(total_ms(r));
            g.cf_ratio.push_back(ratio);
        } else {
            g.ef_ms.push_back(total_ms(r));
            g.ef_ratio.push_back(ratio);
        }
    }

    std::vector<OrderComparison> out;
    for (auto& [key, g] : groups) {
        if (g.cf_ms.empty() || g.ef_ms.empty()) {
            raise(errc::incomplete_grid,
                  "missing " + std::string(g.cf_ms.empty() ? "CF" : "EF") + " records for " +
                      key.file_id + " " + stages::to_string(key.pair.compressor) + "+" +
                      stages::to_string(key.pair.encryptor));
        }
        OrderComparison cmp;
        cmp.file_id = key.file_id;
        cmp.pair = key.pair;
        cmp.cf_stats = aggregate(g.cf_ms);
        cmp.ef_stats = aggregate(g.ef_ms);
        cmp.cf_ratio = median_of(g.cf_ratio);
        cmp.ef_ratio = median_of(g.ef_ratio);
        cmp.time_delta_pct = (cmp.ef_stats.median - cmp.cf_stats.median) / cmp.cf_stats.median * 100.0;
        cmp.faster_order = cmp.ef_stats.median < cmp.cf_stats.median
                               ? pipeline::OrderMode::encryption_first
                               : pipeline::OrderMode::compression_first;
        out.push_back(std::move(cmp));
    }
    return out;
}

const std::vector<SizeClass>& size_classes() {
    static const std::vector<SizeClass> classes = {
        {0, 1'000'000, "lt-1mb"},
        {1'000'000, 10'000'000, "1mb-10mb"},
        {10'000'000, UINT64_MAX, "ge-10mb"},
    };
    return classes;
}

const SizeClass& size_class_of(std::uint64_t byte_length) {
    for (const SizeClass& c : size_classes()) {
        if (byte_length >= c.lo && byte_length < c.hi) return c;
    }
    return size_classes().back();
}

FastestPair fastest_pair(std::span<const pipeline::TrialRecord> records, std::uint64_t class_lo,
                         std::uint64_t class_hi) {
    struct Candidate {
        std::vector<double> ms;
        std::vector<double> size_final;
    };
    std::map<std::pair<PairKey, pipeline::OrderMode>, Candidate> candidates;
    for (const pipeline::TrialRecord& r : records) {
        if (r.size_original < class_lo || r.size_original >= class_hi) continue;
        Candidate& c = candidates[{{r.compress_alg, r.encrypt_alg}, r.order}];
        c.ms.push_back(total_ms(r));
        c.size_final.push_back(static_cast<double>(r.size_final));
    }
    if (candidates.empty()) raise(errc::empty_input, "no records in size class");

    FastestPair best;
    bool first = true;
    for (auto& [key, c] : candidates) {
        double med = median_of(c.ms);
        std::uint64_t med_size = static_cast<std::uint64_t>(median_of(c.size_final));
        // map iteration is already in (pair, order) lexicographic order, so
        // on exact ties the earlier key wins
        bool better = first || med < best.median_total_ms ||
                      (med == best.median_total_ms && med_size < best.median_size_final);
        if (better) {
            best.pair = key.first;
            best.order = key.second;
            best.median_total_ms = med;
            best.median_size_final = med_size;
            first = false;
        }
    }
    return best;
}

std::vector<FeasibilityReport> feasibility(std::span<const pipeline::TrialRecord> records,
                                           const NetworkModel& network, double budget_ms,
                                           bool include_disk) {
    if (budget_ms <= 0) raise(errc::invalid_input, "budget must be positive");

    struct Cell {
        std::uint64_t size_original = 0;
        std::size_t n = 0, meeting = 0;
    };
    struct RowKey {
        std::string file_id;
        PairKey pair;
        pipeline::OrderMode order;
        auto operator<=>(const RowKey&) const = default;
    };
    std::map<RowKey, Cell> cells;
    for (const pipeline::TrialRecord& r : records) {
        Cell& c = cells[{r.file_id, {r.compress_alg, r.encrypt_alg}, r.order}];
        c.size_original = r.size_original;
        ++c.n;
        double delay = total_ms(r) + network.latency_ms;
        if (include_disk) delay += static_cast<double>(r.t_disk_ns) / 1e6;
        if (delay < budget_ms) ++c.meeting;
    }

    // class-fastest pairs, for the flag
    std::map<std::string, FastestPair> fastest_by_class;
    std::set<std::string> classes_present;
    for (auto& [key, c] : cells) classes_present.insert(size_class_of(c.size_original).name);
    for (const std::string& name : classes_present) {
        for (const SizeClass& sc : size_classes()) {
            if (sc.name == name) fastest_by_class[name] = fastest_pair(records, sc.lo, sc.hi);
        }
    }

    std::vector<FeasibilityReport> out;
    for (auto& [key, c] : cells) {
        FeasibilityReport rep;
        rep.file_id = key.file_id;
        rep.pair = key.pair;
        rep.order = key.order;
        rep.budget_ms = budget_ms;
        rep.network = network;
        rep.n = c.n;
        rep.fraction_real_time = static_cast<double>(c.meeting) / static_cast<double>(c.n);
        const FastestPair& fast = fastest_by_class[size_class_of(c.size_original).name];
        rep.fastest_pair_flag = fast.pair == key.pair && fast.order == key.order;
        out.push_back(std::move(rep));
    }
    return out;
}

std::vector<ClassSummary> summarize_classes(std::span<const pipeline::TrialRecord> records,
                                            const NetworkModel& network, double budget_ms) {
    std::vector<ClassSummary> out;
    for (const SizeClass& sc : size_classes()) {
        std::set<std::string> files;
        std::size_t fastest_n = 0, fastest_meeting = 0;
        struct CellAcc {
            std::vector<double> ms;
        };
        std::map<std::tuple<std::string, PairKey, pipeline::OrderMode>, CellAcc> cell_delays;
        bool any = false;
        for (const pipeline::TrialRecord& r : records) {
            if (r.size_original < sc.lo || r.size_original >= sc.hi) continue;
            any = true;
            files.insert(r.file_id);
            cell_delays[{r.file_id, {r.compress_alg, r.encrypt_alg}, r.order}].ms.push_back(
                total_ms(r));
        }
        if (!any) continue;

        ClassSummary summary;
        summary.class_name = sc.name;
        summary.class_lo = sc.lo;
        summary.class_hi = sc.hi;
        summary.files = files.size();
        summary.fastest = fastest_pair(records, sc.lo, sc.hi);

        std::size_t cells_meeting = 0;
        for (auto& [key, acc] : cell_delays) {
            if (median_of(acc.ms) + network.latency_ms < budget_ms) ++cells_meeting;
        }
        summary.fraction_cells_meeting =
            static_cast<double>(cells_meeting) / static_cast<double>(cell_delays.size());

        for (const pipeline::TrialRecord& r : records) {
            if (r.size_original < sc.lo || r.size_original >= sc.hi) continue;
            if (r.compress_alg != summary.fastest.pair.compressor ||
                r.encrypt_alg != summary.fastest.pair.encryptor || r.order != summary.fastest.order)
                continue;
            ++fastest_n;
            if (total_ms(r) + network.latency_ms < budget_ms) ++fastest_meeting;
        }
        summary.fraction_trials_fastest_pair =
            fastest_n ? static_cast<double>(fastest_meeting) / static_cast<double>(fastest_n) : 0.0;
        out.push_back(std::move(summary));
    }
    return out;
}

} // namespace cebench::analysis
