#include "cebench/records_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cebench/errors.hpp"

namespace cebench::io {

using nlohmann::json;
using pipeline::TrialRecord;

namespace {

std::vector<std::string> split_csv(const std::string& row) {
    std::vector<std::string> fields;
    std::string field;
    for (char c : row) {
        if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

stages::AlgorithmId parse_alg(const std::string& s) {
    auto id = stages::parse_algorithm_id(s);
    if (!id) raise(errc::schema, "unknown algorithm id: " + s);
    return *id;
}

pipeline::OrderMode parse_order(const std::string& s) {
    auto order = pipeline::parse_order_mode(s);
    if (!order) raise(errc::schema, "unknown order mode: " + s);
    return *order;
}

/// json parse positions are byte offsets; report line:column instead.
std::string line_col(const std::string& text, std::size_t byte_pos) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte_pos && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

json parse_or_raise(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        raise(errc::schema,
              std::string(what) + " parse error at " + line_col(text, e.byte) + ": " + e.what());
    }
}

} // namespace

std::string record_to_csv_row(const TrialRecord& r) {
    std::ostringstream out;
    out << r.file_id << ',' << pipeline::to_string(r.order) << ','
        << stages::to_string(r.compress_alg) << ',' << stages::to_string(r.encrypt_alg) << ','
        << r.trial_index << ',' << r.t_op1_ns << ',' << r.t_op2_ns << ',' << r.t_disk_ns << ','
        << r.t_inv2_ns << ',' << r.t_inv1_ns << ',' << r.size_original << ','
        << r.size_intermediate << ',' << r.size_final << ',' << (r.verified ? "true" : "false");
    return out.str();
}

TrialRecord record_from_csv_row(const std::string& row) {
    std::vector<std::string> f = split_csv(row);
    if (f.size() != 14) {
        raise(errc::schema, "expected 14 record fields, got " + std::to_string(f.size()));
    }
    try {
        TrialRecord r;
        r.file_id = f[0];
        r.order = parse_order(f[1]);
        r.compress_alg = parse_alg(f[2]);
        r.encrypt_alg = parse_alg(f[3]);
        r.trial_index = std::stoull(f[4]);
        r.t_op1_ns = std::stoull(f[5]);
        r.t_op2_ns = std::stoull(f[6]);
        r.t_disk_ns = std::stoull(f[7]);
        r.t_inv2_ns = std::stoull(f[8]);
        r.t_inv1_ns = std::stoull(f[9]);
        r.size_original = std::stoull(f[10]);
        r.size_intermediate = std::stoull(f[11]);
        r.size_final = std::stoull(f[12]);
        r.verified = f[13] == "true" || f[13] == "1";
        return r;
    } catch (const std::logic_error&) {
        raise(errc::schema, "bad numeric field in record row");
    }
}

static json record_to_json_obj(const TrialRecord& r) {
    return {{"file_id", r.file_id},
            {"order", pipeline::to_string(r.order)},
            {"compress_alg", stages::to_string(r.compress_alg)},
            {"encrypt_alg", stages::to_string(r.encrypt_alg)},
            {"trial_index", r.trial_index},
            {"t_op1_ns", r.t_op1_ns},
            {"t_op2_ns", r.t_op2_ns},
            {"t_disk_ns", r.t_disk_ns},
            {"t_inv2_ns", r.t_inv2_ns},
            {"t_inv1_ns", r.t_inv1_ns},
            {"size_original", r.size_original},
            {"size_intermediate", r.size_intermediate},
            {"size_final", r.size_final},
            {"verified", r.verified}};
}

std::string record_to_json(const TrialRecord& r) {
    return record_to_json_obj(r).dump();
}

TrialRecord record_from_json(const std::string& json_text) {
    json j = parse_or_raise(json_text, "record");
    try {
        TrialRecord r;
        r.file_id = j.at("file_id").get<std::string>();
        r.order = parse_order(j.at("order").get<std::string>());
        r.compress_alg = parse_alg(j.at("compress_alg").get<std::string>());
        r.encrypt_alg = parse_alg(j.at("encrypt_alg").get<std::string>());
        r.trial_index = j.at("trial_index").get<std::uint64_t>();
        r.t_op1_ns = j.at("t_op1_ns").get<std::uint64_t>();
        r.t_op2_ns = j.at("t_op2_ns").get<std::uint64_t>();
        r.t_disk_ns = j.at("t_disk_ns").get<std::uint64_t>();
        r.t_inv2_ns = j.at("t_inv2_ns").get<std::uint64_t>();
        r.t_inv1_ns = j.at("t_inv1_ns").get<std::uint64_t>();
        r.size_original = j.at("size_original").get<std::uint64_t>();
        r.size_intermediate = j.at("size_intermediate").get<std::uint64_t>();
        r.size_final = j.at("size_final").get<std::uint64_t>();
        r.verified = j.at("verified").get<bool>();
        return r;
    } catch (const json::exception& e) {
        raise(errc::schema, std::string("record field error: ") + e.what());
    }
}

void write_records_csv(const std::filesystem::path& path,
                       std::span<const TrialRecord> records, bool append) {
    bool exists = std::filesystem::exists(path);
    std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
    if (!out) raise(errc::io, "cannot write " + path.string());
    if (!append || !exists) out << kRecordsHeader << '\n';
    for (const TrialRecord& r : records) out << record_to_csv_row(r) << '\n';
    if (!out) raise(errc::io, "write failed for " + path.string());
}

std::vector<TrialRecord> read_records_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) raise(errc::io, "cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) raise(errc::schema, "empty records file");
    if (line != kRecordsHeader) {
        raise(errc::schema, "records header mismatch (schema version skew?)");
    }
    std::vector<TrialRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        records.push_back(record_from_csv_row(line));
    }
    return records;
}

std::string config_to_json(const runner::RunConfig& config) {
    json comp = json::array(), enc = json::array(), orders = json::array();
    for (auto id : config.compressors) comp.push_back(stages::to_string(id));
    for (auto id : config.encryptors) enc.push_back(stages::to_string(id));
    for (auto o : config.orders) orders.push_back(pipeline::to_string(o));
    json j = {{"schema_version", kSchemaVersion},
              {"seed", config.seed},
              {"corpus_dir", config.corpus_dir.string()},
              {"file_ids", config.file_ids},
              {"compressors", comp},
              {"encryptors", enc},
              {"orders", orders},
              {"reps_small", config.reps_small},
              {"reps_large", config.reps_large},
              {"size_threshold_bytes", config.size_threshold},
              {"warmup_trials", config.warmup_trials},
              {"measurement_mode", config.measurement_mode},
              {"shuffle", config.shuffle},
              {"write_to_disk", config.write_to_disk}};
    return j.dump(2) + "\n";
}

runner::RunConfig config_from_json(const std::string& json_text) {
    json j = parse_or_raise(json_text, "config");
    try {
        runner::RunConfig config = runner::default_config();
        if (j.contains("schema_version") && j["schema_version"].get<int>() != kSchemaVersion) {
            raise(errc::schema, "unsupported config schema_version");
        }
        config.seed = j.value("seed", config.seed);
        if (j.contains("corpus_dir")) config.corpus_dir = j["corpus_dir"].get<std::string>();
        if (j.contains("file_ids")) {
            config.file_ids = j["file_ids"].get<std::vector<std::string>>();
        }
        if (j.contains("compressors")) {
            config.compressors.clear();
            for (const json& v : j["compressors"]) config.compressors.push_back(parse_alg(v));
        }
        if (j.contains("encryptors")) {
            config.encryptors.clear();
            for (const json& v : j["encryptors"]) config.encryptors.push_back(parse_alg(v));
        }
        if (j.contains("orders")) {
            config.orders.clear();
            for (const json& v : j["orders"]) config.orders.push_back(parse_order(v));
        }
        config.reps_small = j.value("reps_small", config.reps_small);
        config.reps_large = j.value("reps_large", config.reps_large);
        config.size_threshold = j.value("size_threshold_bytes", config.size_threshold);
        config.warmup_trials = j.value("warmup_trials", config.warmup_trials);
        config.measurement_mode = j.value("measurement_mode", config.measurement_mode);
        config.shuffle = j.value("shuffle", config.shuffle);
        config.write_to_disk = j.value("write_to_disk", config.write_to_disk);
        return config;
    } catch (const json::exception& e) {
        raise(errc::schema, std::string("config field error: ") + e.what());
    }
}

runner::RunConfig read_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) raise(errc::io, "cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return config_from_json(text);
}

void write_run_meta(const std::filesystem::path& path, const runner::RunResult& result) {
    // stage parameters and output-format notes ride along so records stay
    // interpretable after registry defaults change
    json algorithms = json::array();
    for (const auto& spec : stages::registry()) {
        algorithms.push_back(
            {{"id", stages::to_string(spec.id)},
             {"kind", spec.kind == stages::StageKind::compress ? "compress" : "encrypt"},
             {"params", spec.params},
             {"key_bytes", spec.key_requirement.key_bytes},
             {"nonce_bytes", spec.key_requirement.nonce_bytes}});
    }
    json j = {{"schema_version", kSchemaVersion},
              {"config", json::parse(config_to_json(result.config))},
              {"config_hash", runner::config_hash(result.config)},
              {"algorithms", algorithms},
              {"environment",
               {{"cpu_model", result.environment.cpu_model},
                {"clock_source", result.environment.clock_source},
                {"timer_overhead_ns", result.environment.timer_overhead_ns}}},
              {"started_at", result.started_at},
              {"finished_at", result.finished_at},
              {"record_count", result.records.size()},
              {"usable", result.usable}};
    std::ofstream out(path, std::ios::trunc);
    if (!out) raise(errc::io, "cannot write " + path.string());
    out << j.dump(2) << "\n";
}

runner::RunResult read_run_meta(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) raise(errc::io, "cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    json j = parse_or_raise(text, "run_meta");
    try {
        runner::RunResult result;
        result.config = config_from_json(j.at("config").dump());
        result.environment.cpu_model = j.at("environment").at("cpu_model").get<std::string>();
        result.environment.clock_source =
            j.at("environment").at("clock_source").get<std::string>();
        result.environment.timer_overhead_ns =
            j.at("environment").at("timer_overhead_ns").get<std::uint64_t>();
        result.started_at = j.value("started_at", "");
        result.finished_at = j.value("finished_at", "");
        result.usable = j.value("usable", true);
        return result;
    } catch (const json::exception& e) {
        raise(errc::schema, std::string("run_meta field error: ") + e.what());
    }
}

std::vector<corpus::Profile> profiles_from_json(const std::string& json_text) {
    json j = parse_or_raise(json_text, "profiles");
    if (!j.is_array()) raise(errc::schema, "profiles file must be a JSON array");
    std::vector<corpus::Profile> profiles;
    for (const json& je : j) {
        try {
            corpus::Profile p;
            p.id = je.at("id").get<std::string>();
            p.byte_length = je.at("byte_length").get<std::uint64_t>();
            auto cc = corpus::parse_content_class(je.at("content_class").get<std::string>());
            if (!cc) {
                raise(errc::schema, "unknown content_class in profile " + p.id);
            }
            p.content_class = *cc;
            p.label = je.value("label", "");
            profiles.push_back(std::move(p));
        } catch (const json::exception& e) {
            raise(errc::schema, std::string("profile field error: ") + e.what());
        }
    }
    return profiles;
}

std::vector<corpus::Profile> read_profiles(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) raise(errc::io, "cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return profiles_from_json(text);
}

void write_comparisons_csv(const std::filesystem::path& path,
                           std::span<const analysis::OrderComparison> comparisons) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) raise(errc::io, "cannot write " + path.string());
    out << "file_id,compress_alg,encrypt_alg,n_cf,n_ef,cf_median_ms,ef_median_ms,cf_mean_ms,"
           "ef_mean_ms,cf_ratio,ef_ratio,time_delta_pct,faster_order\n";
    out.precision(9);
    for (const analysis::OrderComparison& c : comparisons) {
        out << c.file_id << ',' << stages::to_string(c.pair.compressor) << ','
            << stages::to_string(c.pair.encryptor) << ',' << c.cf_stats.n << ',' << c.ef_stats.n
            << ',' << c.cf_stats.median << ',' << c.ef_stats.median << ',' << c.cf_stats.mean
            << ',' << c.ef_stats.mean << ',' << c.cf_ratio << ',' << c.ef_ratio << ','
            << c.time_delta_pct << ',' << pipeline::to_string(c.faster_order) << '\n';
    }
}

void write_feasibility_csv(const std::filesystem::path& path,
                           std::span<const analysis::FeasibilityReport> reports) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) raise(errc::io, "cannot write " + path.string());
    out << "file_id,compress_alg,encrypt_alg,order,n,budget_ms,latency_ms,fraction_real_time,"
           "fastest_pair\n";
    out.precision(9);
    for (const analysis::FeasibilityReport& r : reports) {
        out << r.file_id << ',' << stages::to_string(r.pair.compressor) << ','
            << stages::to_string(r.pair.encryptor) << ',' << pipeline::to_string(r.order) << ','
            << r.n << ',' << r.budget_ms << ',' << r.network.latency_ms << ','
            << r.fraction_real_time << ',' << (r.fastest_pair_flag ? "true" : "false") << '\n';
    }
}

std::string summary_to_json(std::span<const analysis::OrderComparison> comparisons,
                            std::span<const analysis::ClassSummary> classes,
                            const analysis::NetworkModel& network, double budget_ms) {
    json jc = json::array();
    for (const analysis::OrderComparison& c : comparisons) {
        jc.push_back({{"file_id", c.file_id},
                      {"compress_alg", stages::to_string(c.pair.compressor)},
                      {"encrypt_alg", stages::to_string(c.pair.encryptor)},
                      {"cf_median_ms", c.cf_stats.median},
                      {"ef_median_ms", c.ef_stats.median},
                      {"cf_mean_ms", c.cf_stats.mean},
                      {"ef_mean_ms", c.ef_stats.mean},
                      {"cf_ratio", c.cf_ratio},
                      {"ef_ratio", c.ef_ratio},
                      {"time_delta_pct", c.time_delta_pct},
                      {"faster_order", pipeline::to_string(c.faster_order)}});
    }
    json jcls = json::array();
    for (const analysis::ClassSummary& s : classes) {
        jcls.push_back(
            {{"class", s.class_name},
             {"files", s.files},
             {"fastest_pair",
              {{"compress_alg", stages::to_string(s.fastest.pair.compressor)},
               {"encrypt_alg", stages::to_string(s.fastest.pair.encryptor)},
               {"order", pipeline::to_string(s.fastest.order)},
               {"median_total_ms", s.fastest.median_total_ms}}},
             {"fraction_trials_fastest_pair", s.fraction_trials_fastest_pair},
             {"fraction_cells_meeting", s.fraction_cells_meeting}});
    }
    json j = {{"schema_version", kSchemaVersion},
              {"budget_ms", budget_ms},
              {"network", {{"kind", "static"}, {"latency_ms", network.latency_ms}}},
              {"comparisons", jc},
              {"size_classes", jcls}};
    return j.dump(2) + "\n";
}

} // namespace cebench::io
