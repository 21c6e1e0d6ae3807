// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The pdpcmp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "pdpcmp/report.hpp"

#include "pdpcmp/error.hpp"
#include "text_util.hpp"

#include <fmt/chrono.h>
#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <thread>
#include <tuple>

namespace fs = std::filesystem;
using nlohmann::json;

namespace pdpcmp {

namespace {

Combine parse_combine(std::string_view text)
{
    if (text == "noncoherent")
        return Combine::noncoherent;
    if (text == "coherent")
        return Combine::coherent;
    throw Error(fmt::format("config error: unknown combine mode '{}'", text));
}

const char* to_string(Combine combine)
{
    return combine == Combine::noncoherent ? "noncoherent" : "coherent";
}

double round_sig5(double value) { return std::stod(format_sig5(value)); }

json sig5_or_null(const std::optional<double>& value)
{
    return value ? json(round_sig5(*value)) : json(nullptr);
}

bool is_csv(const std::string& path)
{
    auto ext = fs::path(path).extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".csv";
}

double median(std::vector<double> values)
{
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

} // namespace

std::string effective_output_dir(const BatchConfig& config)
{
    if (const char* env = std::getenv(kOutputDirEnv); env && *env)
        return env;
    return config.output_dir;
}

void validate(const BatchConfig& config)
{
    if (!std::isfinite(config.threshold_db) || config.threshold_db >= 0.0)
        throw Error("config error: threshold_db must be negative");
    if (config.models.empty())
        throw Error("config error: models must not be empty");
    if (!std::isfinite(config.bin_width_ns) || config.bin_width_ns <= 0.0)
        throw Error("config error: invalid bin width");
    if (!std::isfinite(config.kl.step_ns) || config.kl.step_ns <= 0.0)
        throw Error("config error: invalid kl step_ns");
    if (!std::isfinite(config.kl.epsilon) || config.kl.epsilon <= 0.0)
        throw Error("config error: invalid epsilon");
}

BatchConfig batch_config_from_json(const json& doc, const std::string& base_dir)
{
    if (!doc.is_object())
        throw Error("config error: top level must be an object");
    static const std::set<std::string> known = {
        "inputs",      "scenarios", "default_scenario", "models", "threshold_db",
        "bin_width_ns", "combine",  "mean_mode",        "kl",     "output_dir", "jobs"};
    for (const auto& [key, _] : doc.items())
        if (!known.contains(key))
            throw Error(fmt::format("config error: unknown key '{}'", key));

    BatchConfig cfg;
    try {
        for (const auto& input : doc.value("inputs", json::array())) {
            fs::path p = input.get<std::string>();
            if (p.is_relative() && !base_dir.empty())
                p = fs::path(base_dir) / p;
            cfg.inputs.push_back(p.string());
        }
        const auto scenarios = doc.value("scenarios", json::object());
        for (const auto& [tx, scenario] : scenarios.items())
            cfg.scenarios[tx] = parse_scenario(scenario.get<std::string>());
        if (doc.contains("default_scenario"))
            cfg.default_scenario = parse_scenario(doc["default_scenario"].get<std::string>());
        if (doc.contains("models")) {
            cfg.models.clear();
            for (const auto& m : doc["models"])
                cfg.models.push_back(parse_model(m.get<std::string>()));
        }
        cfg.threshold_db = doc.value("threshold_db", cfg.threshold_db);
        cfg.bin_width_ns = doc.value("bin_width_ns", cfg.bin_width_ns);
        if (doc.contains("combine"))
            cfg.combine = parse_combine(doc["combine"].get<std::string>());
        if (doc.contains("mean_mode"))
            cfg.mean_mode = parse_mean_mode(doc["mean_mode"].get<std::string>());
        if (doc.contains("kl")) {
            const auto& kl = doc["kl"];
            cfg.kl.step_ns = kl.value("step_ns", cfg.kl.step_ns);
            cfg.kl.epsilon = kl.value("epsilon", cfg.kl.epsilon);
            if (kl.contains("method"))
                cfg.kl.method = parse_resampling(kl["method"].get<std::string>());
            cfg.kl.reverse = kl.value("reverse", cfg.kl.reverse);
        }
        cfg.output_dir = doc.value("output_dir", cfg.output_dir);
        cfg.jobs = doc.value("jobs", cfg.jobs);
    } catch (const json::exception& e) {
        throw Error(fmt::format("config error: {}", e.what()));
    }
    std::sort(cfg.models.begin(), cfg.models.end());
    cfg.models.erase(std::unique(cfg.models.begin(), cfg.models.end()), cfg.models.end());
    validate(cfg);
    return cfg;
}

BatchConfig load_batch_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(fmt::format("config error: cannot open '{}'", path));
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(fmt::format("config error: {}", e.what()));
    }
    return batch_config_from_json(doc, fs::path(path).parent_path().string());
}

json to_json(const BatchConfig& config)
{
    json scenarios = json::object();
    for (const auto& [tx, s] : config.scenarios)
        scenarios[tx] = to_string(s);
    json models = json::array();
    for (const auto m : config.models)
        models.push_back(to_string(m));
    json doc = {
        {"inputs", config.inputs},
        {"scenarios", scenarios},
        {"models", models},
        {"threshold_db", config.threshold_db},
        {"bin_width_ns", config.bin_width_ns},
        {"combine", to_string(config.combine)},
        {"mean_mode", to_string(config.mean_mode)},
        {"kl",
         {{"step_ns", config.kl.step_ns},
          {"epsilon", config.kl.epsilon},
          {"method", to_string(config.kl.method)},
          {"reverse", config.kl.reverse}}},
    };
    if (config.default_scenario)
        doc["default_scenario"] = to_string(*config.default_scenario);
    return doc;
}

PowerDelayProfile reference_tdl_profile(Scenario scenario, TdlModel model, double threshold_db)
{
    return prepare(scaled_profile(model, preset_ds(scenario, model)), threshold_db);
}

ReportRow evaluate_dataset(const PathDataset& dataset, Scenario scenario, const BatchConfig& config)
{
    const auto id = fmt::format("{}/rx{}", dataset.transmitter_id, dataset.receiver_id);
    const auto site = prepare(build_profile(dataset.records, config.bin_width_ns, config.combine, id),
                              config.threshold_db);

    ReportRow row;
    row.tx_id = dataset.transmitter_id;
    row.scenario = scenario;
    row.rx_id = dataset.receiver_id;
    row.tap_count = site.size();
    row.rms_ns = rms_delay_spread(site, MeanMode::power_weighted);
    row.mean_weighted_ns = mean_excess_delay(site, MeanMode::power_weighted);
    row.mean_unweighted_ns = mean_excess_delay(site, MeanMode::unweighted);
    row.max_ns = effective_max_delay(site, config.threshold_db);
    row.grid_step_ns = config.kl.step_ns;
    row.epsilon = config.kl.epsilon;
    row.kl_method = config.kl.method;
    for (const auto model : config.models) {
        const auto tdl = reference_tdl_profile(scenario, model, config.threshold_db);
        const auto kl = config.kl.reverse
                            ? compare(tdl, site, config.kl.step_ns, config.kl.epsilon, config.kl.method)
                            : compare(site, tdl, config.kl.step_ns, config.kl.epsilon, config.kl.method);
        row.kl_bits[static_cast<std::size_t>(model)] = kl.bits;
    }
    return row;
}

BatchResult run_batch(const BatchConfig& config)
{
    validate(config);
    BatchResult result;

    struct Work {
        PathDataset dataset;
        Scenario scenario;
    };
    std::vector<Work> work;
    std::set<std::pair<std::string, std::int64_t>> seen;

    for (const auto& input : config.inputs) {
        ParsedPaths parsed;
        try {
            if (is_csv(input)) {
                parsed = parse_paths_csv_file(input, ParseMode::lenient);
            } else {
                std::ifstream in(input);
                if (!in)
                    throw Error(fmt::format("cannot open '{}'", input));
                parsed = parse_insite_cir(in, ParseMode::lenient);
            }
        } catch (const Error& e) {
            result.failures.push_back({input, e.what()});
            continue;
        }
        result.rows_parsed += parsed.data_rows;
        for (const auto& reject : parsed.rejects)
            result.failures.push_back({fmt::format("{}:{}", input, reject.line), reject.reason});

        for (auto& ds : parsed.datasets) {
            const auto source = fmt::format("{}:{}/rx{}", input, ds.transmitter_id, ds.receiver_id);
            if (!seen.emplace(ds.transmitter_id, ds.receiver_id).second) {
                result.failures.push_back({source, "duplicate receiver"});
                continue;
            }
            const auto it = config.scenarios.find(ds.transmitter_id);
            if (it == config.scenarios.end() && !config.default_scenario) {
                result.failures.push_back({source, "no scenario for transmitter"});
                continue;
            }
            const auto scenario = it != config.scenarios.end() ? it->second : *config.default_scenario;
            work.push_back({std::move(ds), scenario});
        }
    }

    std::vector<std::optional<ReportRow>> rows(work.size());
    std::vector<std::string> errors(work.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < work.size(); i = next++) {
            try {
                rows[i] = evaluate_dataset(work[i].dataset, work[i].scenario, config);
            } catch (const Error& e) {
                errors[i] = e.what();
            }
        }
    };
    unsigned jobs = config.jobs ? config.jobs : std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(1, work.size())));
    {
        std::vector<std::jthread> pool;
        for (unsigned j = 1; j < jobs; ++j)
            pool.emplace_back(worker);
        worker();
    }

    for (std::size_t i = 0; i < work.size(); ++i) {
        if (rows[i])
            result.rows.push_back(std::move(*rows[i]));
        else
            result.failures.push_back(
                {fmt::format("{}/rx{}", work[i].dataset.transmitter_id, work[i].dataset.receiver_id),
                 errors[i]});
    }
    std::sort(result.rows.begin(), result.rows.end(), [](const ReportRow& a, const ReportRow& b) {
        return std::tie(a.tx_id, a.rx_id) < std::tie(b.tx_id, b.rx_id);
    });
    return result;
}

std::string format_sig5(double value)
{
    // C printf semantics: fmt's alternate form pads integers with ".0"
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%#.5g", value);
    std::string text = buffer;
    if (!text.empty() && text.back() == '.')
        text.pop_back();
    return text;
}

void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows)
{
    out << kReportCsvHeader << '\n';
    const auto opt = [](const std::optional<double>& v) { return v ? format_sig5(*v) : std::string(); };
    for (const auto& r : rows) {
        out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.tx_id,
                           to_string(r.scenario), r.rx_id, r.tap_count, format_sig5(r.rms_ns),
                           format_sig5(r.mean_weighted_ns), format_sig5(r.mean_unweighted_ns),
                           format_sig5(r.max_ns), opt(r.kl_bits[0]), opt(r.kl_bits[1]),
                           opt(r.kl_bits[2]), format_sig5(r.grid_step_ns), format_sig5(r.epsilon),
                           to_string(r.kl_method));
    }
}

std::vector<ReportRow> read_report_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || detail::trim(line) != kReportCsvHeader)
        throw Error("bad header: not a report CSV");
    std::vector<ReportRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = detail::trim(line);
        if (text.empty())
            continue;
        const auto f = detail::split(text, ',');
        if (f.size() != 14)
            throw Error(fmt::format("parse error at line {}: expected 14 fields", line_no));
        const auto number = [&](std::string_view s) {
            const auto v = detail::parse_double(s);
            if (!v)
                throw Error(fmt::format("parse error at line {}: '{}'", line_no, s));
            return *v;
        };
        ReportRow r;
        r.tx_id = std::string(f[0]);
        r.scenario = parse_scenario(f[1]);
        const auto rx = detail::parse_int(f[2]);
        const auto taps = detail::parse_int(f[3]);
        if (!rx || !taps)
            throw Error(fmt::format("parse error at line {}: bad id", line_no));
        r.rx_id = *rx;
        r.tap_count = static_cast<std::size_t>(*taps);
        r.rms_ns = number(f[4]);
        r.mean_weighted_ns = number(f[5]);
        r.mean_unweighted_ns = number(f[6]);
        r.max_ns = number(f[7]);
        for (std::size_t m = 0; m < 3; ++m)
            if (!detail::trim(f[8 + m]).empty())
                r.kl_bits[m] = number(f[8 + m]);
        r.grid_step_ns = number(f[11]);
        r.epsilon = number(f[12]);
        r.kl_method = parse_resampling(f[13]);
        rows.push_back(std::move(r));
    }
    return rows;
}

json report_json(const BatchResult& result, const BatchConfig& config)
{
    static const std::array<const char*, 3> kl_keys = {"kl_tdl_a_bits", "kl_tdl_b_bits",
                                                       "kl_tdl_c_bits"};
    json rows = json::array();
    std::map<std::string, std::vector<double>> columns;
    for (const auto& r : result.rows) {
        json row = {
            {"tx_id", r.tx_id},
            {"scenario", to_string(r.scenario)},
            {"rx_id", r.rx_id},
            {"tap_count", r.tap_count},
            {"rms_ns", round_sig5(r.rms_ns)},
            {"mean_weighted_ns", round_sig5(r.mean_weighted_ns)},
            {"mean_unweighted_ns", round_sig5(r.mean_unweighted_ns)},
            {"max_ns", round_sig5(r.max_ns)},
            {"grid_step_ns", round_sig5(r.grid_step_ns)},
            {"epsilon", round_sig5(r.epsilon)},
            {"kl_method", to_string(r.kl_method)},
        };
        for (std::size_t m = 0; m < 3; ++m)
            row[kl_keys[m]] = sig5_or_null(r.kl_bits[m]);
        for (const char* key : {"rms_ns", "mean_weighted_ns", "mean_unweighted_ns", "max_ns"})
            columns[key].push_back(row[key].get<double>());
        for (std::size_t m = 0; m < 3; ++m)
            if (r.kl_bits[m])
                columns[kl_keys[m]].push_back(row[kl_keys[m]].get<double>());
        rows.push_back(std::move(row));
    }

    json summary = json::object();
    for (const auto& [key, values] : columns) {
        if (values.empty())
            continue;
        summary[key] = {{"min", *std::min_element(values.begin(), values.end())},
                        {"median", round_sig5(median(values))},
                        {"max", *std::max_element(values.begin(), values.end())}};
    }

    json failures = json::array();
    for (const auto& f : result.failures)
        failures.push_back({{"source", f.source}, {"reason", f.reason}});

    return {{"config", to_json(config)},
            {"rows", rows},
            {"failures", failures},
            {"summary", summary}};
}

void write_batch_outputs(const BatchResult& result, const BatchConfig& config,
                         const std::string& output_dir)
{
    std::error_code ec;
    fs::create_directories(output_dir, ec);
    if (ec)
        throw Error(fmt::format("cannot create output directory '{}': {}", output_dir, ec.message()));
    const auto dir = fs::path(output_dir);
    const auto open = [](const fs::path& p) {
        std::ofstream out(p, std::ios::binary);
        if (!out)
            throw Error(fmt::format("cannot write '{}'", p.string()));
        return out;
    };
    {
        auto out = open(dir / "report.csv");
        write_report_csv(out, result.rows);
    }
    {
        auto out = open(dir / "report.json");
        out << report_json(result, config).dump(2) << '\n';
    }
    {
        const json meta = {
            {"tool", "pdpcmp"},
            {"generated_at", fmt::format("{:%Y-%m-%dT%H:%M:%SZ}",
                                         fmt::gmtime(std::chrono::system_clock::to_time_t(
                                             std::chrono::system_clock::now())))},
            {"inputs", config.inputs},
            {"rows", result.rows.size()},
            {"rows_parsed", result.rows_parsed},
            {"failures", result.failures.size()},
        };
        auto out = open(dir / "run_meta.json");
        out << meta.dump(2) << '\n';
    }
}

void write_plot_data(std::ostream& out, const std::vector<PowerDelayProfile>& profiles,
                     const std::vector<std::string>& labels)
{
    if (profiles.size() != labels.size())
        throw Error("one label per profile required");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& p : profiles) {
        lo = std::min(lo, p.taps().front().excess_delay_ns);
        hi = std::max(hi, p.taps().back().excess_delay_ns);
    }
    if (!profiles.empty())
        out << fmt::format("# delay_extent_ns={},{} series={}\n", lo, hi, profiles.size());
    out << "delay_ns,rel_power_db,series\n";
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        const auto normalized = normalize_to_peak(profiles[i]);
        for (const auto& tap : normalized.taps())
            out << fmt::format("{},{},{}\n", tap.excess_delay_ns, tap.power_db, labels[i]);
    }
}

} // namespace pdpcmp
