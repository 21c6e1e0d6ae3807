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

#include "pdpcmp/ingest.hpp"

#include "pdpcmp/error.hpp"
#include "text_util.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <utility>

namespace pdpcmp {

namespace {

constexpr double kSyntheticBaseToaS = 1e-7;

double wrap_phase(double deg)
{
    double wrapped = std::fmod(deg, 360.0);
    if (wrapped < 0.0)
        wrapped += 360.0;
    if (wrapped >= 360.0)
        wrapped = 0.0;
    return wrapped;
}

// Collects records into per-(tx, rx) datasets in order of first appearance.
class DatasetCollector {
public:
    void add(const std::string& tx, std::int64_t rx, const MultipathRecord& record)
    {
        const auto key = std::make_pair(tx, rx);
        auto it = index_.find(key);
        if (it == index_.end()) {
            it = index_.emplace(key, datasets_.size()).first;
            datasets_.push_back({rx, tx, {}});
        }
        datasets_[it->second].records.push_back(record);
    }

    std::vector<PathDataset> take() { return std::move(datasets_); }

private:
    std::map<std::pair<std::string, std::int64_t>, std::size_t> index_;
    std::vector<PathDataset> datasets_;
};

// Handles one malformed row according to the parse mode.
class RejectSink {
public:
    RejectSink(ParseMode mode, std::vector<RowReject>& rejects)
        : mode_(mode)
        , rejects_(rejects)
    {
    }

    void reject(std::size_t line, std::string reason)
    {
        if (mode_ == ParseMode::strict)
            throw Error(std::move(reason));
        rejects_.push_back({line, std::move(reason)});
    }

private:
    ParseMode mode_;
    std::vector<RowReject>& rejects_;
};

std::optional<MultipathRecord> make_record(std::string_view path_id, std::string_view toa,
                                           std::string_view power, std::string_view phase,
                                           std::size_t line, RejectSink& sink)
{
    const auto id = detail::parse_int(path_id);
    const auto toa_s = detail::parse_double(toa);
    const auto power_dbm = detail::parse_double(power);
    const auto phase_deg = detail::parse_double(phase);
    if (!id || !toa_s || !power_dbm || !phase_deg) {
        const char* field = !id ? "path_id" : !toa_s ? "toa_s" : !power_dbm ? "power_dbm" : "phase_deg";
        sink.reject(line, fmt::format("parse error at line {}: non-numeric {}", line, field));
        return std::nullopt;
    }
    if (*toa_s < 0.0) {
        sink.reject(line, fmt::format("invalid TOA at line {}: {}", line, *toa_s));
        return std::nullopt;
    }
    return MultipathRecord{*id, *toa_s, *power_dbm, wrap_phase(*phase_deg)};
}

} // namespace

ParsedPaths parse_paths_csv(std::istream& in, ParseMode mode)
{
    ParsedPaths out;
    RejectSink sink(mode, out.rejects);
    DatasetCollector collector;

    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view text = detail::trim(line);
        if (line_no == 1 && text.starts_with("\xEF\xBB\xBF"))
            text.remove_prefix(3);
        if (!have_header) {
            if (text != kPathsCsvHeader)
                throw Error(fmt::format("bad header: expected '{}'", kPathsCsvHeader));
            have_header = true;
            continue;
        }
        if (text.empty())
            continue;
        ++out.data_rows;

        const auto fields = detail::split(text, ',');
        if (fields.size() != 6) {
            sink.reject(line_no, fmt::format("parse error at line {}: expected 6 fields, got {}",
                                             line_no, fields.size()));
            continue;
        }
        const std::string tx(detail::trim(fields[0]));
        const auto rx = detail::parse_int(fields[1]);
        if (tx.empty() || !rx) {
            sink.reject(line_no, fmt::format("parse error at line {}: bad tx_id/rx_id", line_no));
            continue;
        }
        if (auto record = make_record(fields[2], fields[3], fields[4], fields[5], line_no, sink))
            collector.add(tx, *rx, *record);
    }
    if (!have_header)
        throw Error("bad header: empty input");
    out.datasets = collector.take();
    return out;
}

ParsedPaths parse_paths_csv_file(const std::string& path, ParseMode mode)
{
    std::ifstream in(path);
    if (!in)
        throw Error(fmt::format("cannot open '{}'", path));
    return parse_paths_csv(in, mode);
}

void write_paths_csv(std::ostream& out, const std::vector<PathDataset>& datasets)
{
    out << kPathsCsvHeader << '\n';
    for (const auto& ds : datasets)
        for (const auto& r : ds.records)
            out << fmt::format("{},{},{},{},{},{}\n", ds.transmitter_id, ds.receiver_id,
                               r.path_id, r.toa_s, r.power_dbm, r.phase_deg);
}

ParsedPaths parse_insite_cir(std::istream& in, ParseMode mode)
{
    enum Column { kPath, kToa, kPower, kPhase, kColumnCount };
    static const std::map<std::string, Column, std::less<>> aliases = {
        {"path_id", kPath}, {"path", kPath},   {"toa_s", kToa},       {"toa", kToa},
        {"time_of_arrival_s", kToa},           {"power_dbm", kPower}, {"power", kPower},
        {"received_power_dbm", kPower},        {"phase_deg", kPhase}, {"phase", kPhase},
    };

    ParsedPaths out;
    RejectSink sink(mode, out.rejects);
    DatasetCollector collector;

    std::string tx = "unknown";
    std::int64_t rx = 0;
    std::optional<std::array<std::size_t, kColumnCount>> layout;
    std::size_t min_fields = 0;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = detail::trim(line);
        if (text.empty())
            continue;
        if (text.front() == '#') {
            const auto body = detail::trim(text.substr(1));
            const auto colon = body.find(':');
            if (colon == std::string_view::npos)
                continue;
            const auto key = detail::trim(body.substr(0, colon));
            const auto value = detail::trim(body.substr(colon + 1));
            if (key == "tx") {
                tx = std::string(value);
            } else if (key == "rx") {
                const auto id = detail::parse_int(value);
                if (!id)
                    throw Error(fmt::format("parse error at line {}: bad rx id", line_no));
                rx = *id;
            } else if (key == "columns") {
                std::array<std::optional<std::size_t>, kColumnCount> found;
                const auto names = detail::split_ws(value);
                for (std::size_t i = 0; i < names.size(); ++i) {
                    const auto it = aliases.find(names[i]);
                    if (it != aliases.end() && !found[it->second])
                        found[it->second] = i;
                }
                std::array<std::size_t, kColumnCount> resolved{};
                min_fields = 0;
                for (int c = 0; c < kColumnCount; ++c) {
                    if (!found[c])
                        throw Error(fmt::format("unknown layout: column mapping at line {} lacks "
                                                "path_id/toa_s/power_dbm/phase_deg",
                                                line_no));
                    resolved[c] = *found[c];
                    min_fields = std::max(min_fields, *found[c] + 1);
                }
                layout = resolved;
            }
            continue;
        }
        if (!layout)
            throw Error(fmt::format("unknown layout: data at line {} before any '# columns:' line",
                                    line_no));
        ++out.data_rows;
        const auto fields = detail::split_ws(text);
        if (fields.size() < min_fields) {
            sink.reject(line_no, fmt::format("parse error at line {}: expected at least {} columns",
                                             line_no, min_fields));
            continue;
        }
        const auto& l = *layout;
        if (auto record = make_record(fields[l[kPath]], fields[l[kToa]], fields[l[kPower]],
                                      fields[l[kPhase]], line_no, sink))
            collector.add(tx, rx, *record);
    }
    out.datasets = collector.take();
    return out;
}

PathDataset generate_synthetic(const SyntheticSpec& spec, std::int64_t receiver_id,
                               std::string transmitter_id)
{
    const auto finite_positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (spec.n_paths < 1 || !finite_positive(spec.decay_constant_ns) ||
        !finite_positive(spec.max_excess_ns) || !std::isfinite(spec.base_power_dbm) ||
        !std::isfinite(spec.ripple_db) || spec.ripple_db < 0.0)
        throw Error("invalid spec");

    // mt19937_64 output is fixed by the standard; the std distributions are not.
    std::mt19937_64 rng(spec.seed);
    const auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    const double db_per_ns = 10.0 * std::numbers::log10e / spec.decay_constant_ns;

    PathDataset out{receiver_id, std::move(transmitter_id), {}};
    out.records.reserve(static_cast<std::size_t>(spec.n_paths));
    for (int k = 0; k < spec.n_paths; ++k) {
        double delay_ns = 0.0;
        double power = spec.base_power_dbm;
        if (k > 0) {
            delay_ns = uniform() * spec.max_excess_ns;
            power += -db_per_ns * delay_ns + spec.ripple_db * (2.0 * uniform() - 1.0);
        }
        const double phase = uniform() * 360.0;
        out.records.push_back({k + 1, kSyntheticBaseToaS + delay_ns * 1e-9, power, phase});
    }
    return out;
}

} // namespace pdpcmp
