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

#include "cli.hpp"

#include "pdpcmp/divergence.hpp"
#include "pdpcmp/error.hpp"
#include "pdpcmp/metrics.hpp"
#include "pdpcmp/pdp.hpp"
#include "pdpcmp/report.hpp"
#include "pdpcmp/tdl.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace pdpcmp::cli {

namespace {

using nlohmann::json;

struct TdlArgs {
    std::string model;
    std::optional<double> ds;
    std::string scenario;
    std::string output;
    bool presets = false;
};

struct MetricsArgs {
    std::string file;
    double threshold = kDefaultThresholdDb;
    std::string mean_mode = "power_weighted";
    bool json = false;
};

struct CompareArgs {
    std::string reference;
    std::string approx;
    std::string model;
    std::optional<double> ds;
    std::string scenario;
    double step = kDefaultGridStepNs;
    double epsilon = kDefaultEpsilon;
    std::string method = "bin_accumulate";
    double threshold = kDefaultThresholdDb;
    bool reverse = false;
    bool json = false;
};

struct BatchArgs {
    std::string config;
    std::vector<std::string> inputs;
    std::vector<std::string> scenarios; // TX=SCENARIO
    std::string default_scenario;
    std::vector<std::string> models;
    std::optional<double> threshold;
    std::optional<double> bin_width;
    std::string combine;
    std::string mean_mode;
    std::optional<double> step;
    std::optional<double> epsilon;
    std::string method;
    bool reverse = false;
    std::string output_dir;
    std::optional<unsigned> jobs;
};

struct PlotArgs {
    std::vector<std::string> files;
    std::vector<std::string> labels;
    std::string output;
};

// Normalizes if needed so files in either power frame are accepted.
PowerDelayProfile load_prepared(const std::string& path, double threshold_db)
{
    return prepare(read_pdp_file(path), threshold_db);
}

void emit(const std::string& text, const std::string& path, std::ostream& out)
{
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file)
        throw Error(fmt::format("cannot write '{}'", path));
    file << text;
}

PowerDelayProfile tdl_from_args(const std::string& model_text, const std::optional<double>& ds,
                                const std::string& scenario_text)
{
    const auto model = parse_model(model_text);
    if (ds.has_value() == !scenario_text.empty())
        throw Error("give exactly one of --ds or --scenario");
    const double spread = ds ? *ds : preset_ds(parse_scenario(scenario_text), model);
    return scaled_profile(model, spread);
}

int cmd_tdl(const TdlArgs& a, std::ostream& out)
{
    if (a.presets) {
        std::ostringstream text;
        text << "scenario,model,profile,ds_ns,mean_unweighted_ns,mean_weighted_ns,max_ns,taps\n";
        for (const auto& p : presets()) {
            const auto m = summarize(scaled_profile(p.model, p.ds_ns), kDefaultThresholdDb,
                                     MeanMode::unweighted);
            const auto weighted = mean_excess_delay(prepare(scaled_profile(p.model, p.ds_ns)));
            text << fmt::format("{},{},{},{},{},{},{},{}\n", to_string(p.scenario),
                                to_string(p.model), to_string(p.profile_label), format_sig5(p.ds_ns),
                                format_sig5(m.mean_excess_ns), format_sig5(weighted),
                                format_sig5(m.eff_max_ns), m.tap_count);
        }
        emit(text.str(), a.output, out);
        return kExitOk;
    }
    if (a.model.empty())
        throw Error("--model is required");
    emit(to_pdp_text(tdl_from_args(a.model, a.ds, a.scenario)), a.output, out);
    return kExitOk;
}

int cmd_metrics(const MetricsArgs& a, std::ostream& out)
{
    const auto mode = parse_mean_mode(a.mean_mode);
    const auto pdp = normalize_to_peak(read_pdp_file(a.file));
    const auto m = summarize(pdp, a.threshold, mode);
    if (a.json) {
        out << json{{"source", pdp.source_id()},
                    {"rms_ds_ns", m.rms_ds_ns},
                    {"mean_excess_ns", m.mean_excess_ns},
                    {"mean_mode", to_string(m.mean_mode)},
                    {"eff_max_ns", m.eff_max_ns},
                    {"threshold_db", m.threshold_db},
                    {"tap_count", m.tap_count}}
                   .dump(2)
            << '\n';
        return kExitOk;
    }
    out << fmt::format("source:         {}\n", pdp.source_id());
    out << fmt::format("tap_count:      {}\n", m.tap_count);
    out << fmt::format("threshold_db:   {}\n", m.threshold_db);
    out << fmt::format("rms_ds_ns:      {}\n", format_sig5(m.rms_ds_ns));
    out << fmt::format("mean_excess_ns: {} ({})\n", format_sig5(m.mean_excess_ns),
                       to_string(m.mean_mode));
    out << fmt::format("eff_max_ns:     {}\n", format_sig5(m.eff_max_ns));
    return kExitOk;
}

int cmd_compare(const CompareArgs& a, std::ostream& out)
{
    if (a.approx.empty() == a.model.empty())
        throw Error("give exactly one of --approx or --model");
    const auto reference = load_prepared(a.reference, a.threshold);
    const auto approx = a.approx.empty()
                            ? prepare(tdl_from_args(a.model, a.ds, a.scenario), a.threshold)
                            : load_prepared(a.approx, a.threshold);
    const auto method = parse_resampling(a.method);
    const auto kl = a.reverse ? compare(approx, reference, a.step, a.epsilon, method)
                              : compare(reference, approx, a.step, a.epsilon, method);
    if (a.json) {
        out << json{{"bits", kl.bits},
                    {"reference", kl.reference_id},
                    {"approx", kl.approx_id},
                    {"grid",
                     {{"start_ns", kl.grid.start_ns},
                      {"step_ns", kl.grid.step_ns},
                      {"n_bins", kl.grid.n_bins}}},
                    {"epsilon", kl.epsilon},
                    {"method", to_string(kl.method)}}
                   .dump(2)
            << '\n';
        return kExitOk;
    }
    out << fmt::format("kl_bits:   {}\n", format_sig5(kl.bits));
    out << fmt::format("reference: {}\n", kl.reference_id);
    out << fmt::format("approx:    {}\n", kl.approx_id);
    out << fmt::format("grid:      start={} step={} n_bins={}\n", kl.grid.start_ns, kl.grid.step_ns,
                       kl.grid.n_bins);
    out << fmt::format("epsilon:   {}\n", kl.epsilon);
    out << fmt::format("method:    {}\n", to_string(kl.method));
    return kExitOk;
}

BatchConfig batch_config_from_args(const BatchArgs& a)
{
    BatchConfig cfg = a.config.empty() ? BatchConfig{} : load_batch_config(a.config);
    for (const auto& input : a.inputs)
        cfg.inputs.push_back(input);
    for (const auto& entry : a.scenarios) {
        const auto eq = entry.find('=');
        if (eq == std::string::npos)
            throw Error(fmt::format("--scenario expects TX=SCENARIO, got '{}'", entry));
        cfg.scenarios[entry.substr(0, eq)] = parse_scenario(entry.substr(eq + 1));
    }
    if (!a.default_scenario.empty())
        cfg.default_scenario = parse_scenario(a.default_scenario);
    if (!a.models.empty()) {
        cfg.models.clear();
        for (const auto& m : a.models)
            cfg.models.push_back(parse_model(m));
        std::sort(cfg.models.begin(), cfg.models.end());
        cfg.models.erase(std::unique(cfg.models.begin(), cfg.models.end()), cfg.models.end());
    }
    if (a.threshold)
        cfg.threshold_db = *a.threshold;
    if (a.bin_width)
        cfg.bin_width_ns = *a.bin_width;
    if (!a.combine.empty()) {
        if (a.combine != "noncoherent" && a.combine != "coherent")
            throw Error(fmt::format("unknown combine mode '{}'", a.combine));
        cfg.combine = a.combine == "coherent" ? Combine::coherent : Combine::noncoherent;
    }
    if (!a.mean_mode.empty())
        cfg.mean_mode = parse_mean_mode(a.mean_mode);
    if (a.step)
        cfg.kl.step_ns = *a.step;
    if (a.epsilon)
        cfg.kl.epsilon = *a.epsilon;
    if (!a.method.empty())
        cfg.kl.method = parse_resampling(a.method);
    if (a.reverse)
        cfg.kl.reverse = true;
    cfg.output_dir = effective_output_dir(cfg);
    if (!a.output_dir.empty())
        cfg.output_dir = a.output_dir;
    if (a.jobs)
        cfg.jobs = *a.jobs;
    if (cfg.inputs.empty())
        throw Error("config error: no inputs");
    validate(cfg);
    return cfg;
}

int cmd_batch(const BatchArgs& a, std::ostream& out, std::ostream& err)
{
    const auto cfg = batch_config_from_args(a);
    const auto result = run_batch(cfg);
    write_batch_outputs(result, cfg, cfg.output_dir);
    for (const auto& f : result.failures)
        err << fmt::format("warning: {}: {}\n", f.source, f.reason);
    out << fmt::format("rows: {}  failures: {}  output: {}\n", result.rows.size(),
                       result.failures.size(), cfg.output_dir);
    return result.partial() ? kExitPartial : kExitOk;
}

int cmd_plot_data(const PlotArgs& a, std::ostream& out)
{
    if (!a.labels.empty() && a.labels.size() != a.files.size())
        throw Error("--label must be given once per file or not at all");
    std::vector<PowerDelayProfile> profiles;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < a.files.size(); ++i) {
        profiles.push_back(read_pdp_file(a.files[i]));
        if (!a.labels.empty())
            labels.push_back(a.labels[i]);
        else if (!profiles.back().source_id().empty())
            labels.push_back(profiles.back().source_id());
        else
            labels.push_back(std::filesystem::path(a.files[i]).stem().string());
    }
    std::ostringstream text;
    write_plot_data(text, profiles, labels);
    emit(text.str(), a.output, out);
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Power delay profile toolkit: 3GPP TDL profiles, delay metrics, KL comparison"};
    app.name("pdpcmp");
    app.require_subcommand(1);

    TdlArgs tdl;
    auto* tdl_cmd = app.add_subcommand("tdl", "Emit a delay-scaled TDL-A/B/C profile");
    tdl_cmd->add_option("--model,-m", tdl.model, "A, B or C");
    tdl_cmd->add_option("--ds", tdl.ds, "Desired RMS delay spread [ns]");
    tdl_cmd->add_option("--scenario,-s", tdl.scenario, "Preset delay spread: umi-o2i or i2i");
    tdl_cmd->add_option("--output,-o", tdl.output, "Output file (default stdout)");
    tdl_cmd->add_flag("--presets", tdl.presets, "Print metrics for every preset instead");

    MetricsArgs metrics;
    auto* metrics_cmd = app.add_subcommand("metrics", "Delay metrics of a PDP file");
    metrics_cmd->add_option("file", metrics.file, "PDP file")->required();
    metrics_cmd->add_option("--threshold,-t", metrics.threshold, "Threshold [dB] relative to peak");
    metrics_cmd->add_option("--mean-mode", metrics.mean_mode, "power_weighted or unweighted");
    metrics_cmd->add_flag("--json", metrics.json, "JSON output");

    CompareArgs cmp;
    auto* compare_cmd = app.add_subcommand("compare", "KL divergence D(reference || approx) in bits");
    compare_cmd->add_option("reference", cmp.reference, "Reference PDP file")->required();
    compare_cmd->add_option("--approx", cmp.approx, "Approximating PDP file");
    compare_cmd->add_option("--model,-m", cmp.model, "Approximate with TDL model A, B or C");
    compare_cmd->add_option("--ds", cmp.ds, "TDL delay spread [ns]");
    compare_cmd->add_option("--scenario,-s", cmp.scenario, "TDL preset: umi-o2i or i2i");
    compare_cmd->add_option("--step", cmp.step, "Grid step [ns]");
    compare_cmd->add_option("--epsilon", cmp.epsilon, "Probability floor (fraction of total mass)");
    compare_cmd->add_option("--method", cmp.method, "bin_accumulate or linear_interp");
    compare_cmd->add_option("--threshold,-t", cmp.threshold, "Threshold [dB] relative to peak");
    compare_cmd->add_flag("--reverse", cmp.reverse, "Compute D(approx || reference)");
    compare_cmd->add_flag("--json", cmp.json, "JSON output");

    BatchArgs batch;
    auto* batch_cmd = app.add_subcommand("batch", "Per-receiver report over path exports");
    batch_cmd->add_option("--config,-c", batch.config, "JSON config file");
    batch_cmd->add_option("--input,-i", batch.inputs, "Path CSV or impulse-response export");
    batch_cmd->add_option("--scenario", batch.scenarios, "TX=umi-o2i|i2i");
    batch_cmd->add_option("--default-scenario", batch.default_scenario, "Scenario for unmapped TX");
    batch_cmd->add_option("--models", batch.models, "Subset of A B C")->delimiter(',');
    batch_cmd->add_option("--threshold,-t", batch.threshold, "Threshold [dB] relative to peak");
    batch_cmd->add_option("--bin-width", batch.bin_width, "Delay bin width [ns]");
    batch_cmd->add_option("--combine", batch.combine, "noncoherent or coherent");
    batch_cmd->add_option("--mean-mode", batch.mean_mode, "power_weighted or unweighted");
    batch_cmd->add_option("--step", batch.step, "KL grid step [ns]");
    batch_cmd->add_option("--epsilon", batch.epsilon, "KL probability floor");
    batch_cmd->add_option("--method", batch.method, "bin_accumulate or linear_interp");
    batch_cmd->add_flag("--reverse", batch.reverse, "Compute D(TDL || site)");
    batch_cmd->add_option("--output-dir,-o", batch.output_dir,
                          fmt::format("Output directory (env {})", kOutputDirEnv));
    batch_cmd->add_option("--jobs,-j", batch.jobs, "Worker threads");

    PlotArgs plot;
    auto* plot_cmd = app.add_subcommand("plot-data", "Stem-plot data for one or more PDP files");
    plot_cmd->add_option("files", plot.files, "PDP files")->required();
    plot_cmd->add_option("--label,-l", plot.labels, "Series label per file");
    plot_cmd->add_option("--output,-o", plot.output, "Output file (default stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (tdl_cmd->parsed())
            return cmd_tdl(tdl, out);
        if (metrics_cmd->parsed())
            return cmd_metrics(metrics, out);
        if (compare_cmd->parsed())
            return cmd_compare(cmp, out);
        if (batch_cmd->parsed())
            return cmd_batch(batch, out, err);
        if (plot_cmd->parsed())
            return cmd_plot_data(plot, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

} // namespace pdpcmp::cli
