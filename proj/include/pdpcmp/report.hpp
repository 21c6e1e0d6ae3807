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

#pragma once

#include "pdpcmp/divergence.hpp"
#include "pdpcmp/ingest.hpp"
#include "pdpcmp/metrics.hpp"
#include "pdpcmp/pdp.hpp"
#include "pdpcmp/tdl.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pdpcmp {

/// Environment variable that overrides BatchConfig::output_dir.
inline constexpr const char* kOutputDirEnv = "PDPCMP_OUTPUT_DIR";

struct KlOptions {
    double step_ns = kDefaultGridStepNs;
    double epsilon = kDefaultEpsilon;
    Resampling method = Resampling::bin_accumulate;
    bool reverse = false; ///< D(TDL || site) instead of D(site || TDL)
};

struct BatchConfig {
    std::vector<std::string> inputs;
    std::map<std::string, Scenario> scenarios; ///< keyed by transmitter id
    std::optional<Scenario> default_scenario;
    std::vector<TdlModel> models{TdlModel::A, TdlModel::B, TdlModel::C};
    double threshold_db = kDefaultThresholdDb;
    double bin_width_ns = kDefaultBinWidthNs;
    Combine combine = Combine::noncoherent;
    MeanMode mean_mode = MeanMode::power_weighted;
    KlOptions kl;
    std::string output_dir = "pdpcmp-out";
    unsigned jobs = 0; ///< 0 = hardware concurrency
};

/// `PDPCMP_OUTPUT_DIR` if set and non-empty, else config.output_dir.
std::string effective_output_dir(const BatchConfig& config);

/// Throws Error on a violated invariant (threshold >= 0, no models, ...).
void validate(const BatchConfig& config);

/// Reads the JSON config layout documented in the README. Relative input
/// paths are resolved against `base_dir` when it is non-empty.
BatchConfig batch_config_from_json(const nlohmann::json& doc, const std::string& base_dir = {});
BatchConfig load_batch_config(const std::string& path);
nlohmann::json to_json(const BatchConfig& config);

struct ReportRow {
    std::string tx_id;
    Scenario scenario = Scenario::I2I;
    std::int64_t rx_id = 0;
    std::size_t tap_count = 0;
    double rms_ns = 0.0;
    double mean_weighted_ns = 0.0;
    double mean_unweighted_ns = 0.0;
    double max_ns = 0.0;
    std::array<std::optional<double>, 3> kl_bits; ///< indexed by TdlModel
    double grid_step_ns = kDefaultGridStepNs;
    double epsilon = kDefaultEpsilon;
    Resampling kl_method = Resampling::bin_accumulate;
};

struct BatchFailure {
    std::string source; ///< file, or file:tx/rx
    std::string reason;
};

struct BatchResult {
    std::vector<ReportRow> rows; ///< sorted by (tx_id, rx_id)
    std::vector<BatchFailure> failures;
    std::size_t rows_parsed = 0;

    bool partial() const { return !failures.empty(); }
};

/// The TDL comparison profile used for one scenario/model pair.
PowerDelayProfile reference_tdl_profile(Scenario scenario, TdlModel model, double threshold_db);

/// Metrics and KL columns for one receiver.
ReportRow evaluate_dataset(const PathDataset& dataset, Scenario scenario, const BatchConfig& config);

/// Parses every input, evaluates each receiver, and collects failures
/// instead of aborting on them.
BatchResult run_batch(const BatchConfig& config);

/// Five significant digits, trailing zeros kept ("172.20", "0.61730").
std::string format_sig5(double value);

inline constexpr const char* kReportCsvHeader =
    "tx_id,scenario,rx_id,tap_count,rms_ns,mean_weighted_ns,mean_unweighted_ns,max_ns,"
    "kl_tdl_a_bits,kl_tdl_b_bits,kl_tdl_c_bits,grid_step_ns,epsilon,kl_method";

void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows);
std::vector<ReportRow> read_report_csv(std::istream& in);

/// Rows, failures, config echo, and min/median/max per numeric column.
nlohmann::json report_json(const BatchResult& result, const BatchConfig& config);

/// Writes report.csv, report.json and the run_meta.json sidecar into
/// `output_dir`. Only the sidecar carries run-specific metadata.
void write_batch_outputs(const BatchResult& result, const BatchConfig& config,
                         const std::string& output_dir);

/// Stem-plot data: `delay_ns,rel_power_db,series` rows, each profile peak-normalized.
void write_plot_data(std::ostream& out, const std::vector<PowerDelayProfile>& profiles,
                     const std::vector<std::string>& labels);

} // namespace pdpcmp
