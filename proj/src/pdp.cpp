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

#include "pdpcmp/pdp.hpp"

#include "pdpcmp/error.hpp"
#include "text_util.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>

namespace pdpcmp {

namespace {

constexpr double kCancellationFloor = 1e-12;

} // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

void validate(const MultipathRecord& record)
{
    if (!std::isfinite(record.toa_s) || record.toa_s < 0.0)
        throw Error(fmt::format("invalid TOA: path {} has toa_s={}", record.path_id, record.toa_s));
    if (!std::isfinite(record.power_dbm))
        throw Error(fmt::format("invalid power: path {}", record.path_id));
    if (!std::isfinite(record.phase_deg))
        throw Error(fmt::format("invalid phase: path {}", record.path_id));
}

PowerDelayProfile::PowerDelayProfile(std::vector<Tap> taps, PowerFrame frame,
                                     std::optional<double> threshold_db, std::string source_id)
    : taps_(std::move(taps))
    , frame_(frame)
    , threshold_db_(threshold_db)
    , source_id_(std::move(source_id))
{
    if (taps_.empty())
        throw Error("empty profile");
    for (std::size_t k = 0; k < taps_.size(); ++k) {
        const auto& tap = taps_[k];
        if (!std::isfinite(tap.excess_delay_ns) || tap.excess_delay_ns < 0.0)
            throw Error(fmt::format("invalid tap delay at index {}", k));
        if (!std::isfinite(tap.power_db))
            throw Error(fmt::format("invalid tap power at index {}", k));
        if (k > 0 && !(tap.excess_delay_ns > taps_[k - 1].excess_delay_ns))
            throw Error(fmt::format("taps not strictly ascending at index {}", k));
    }
    if (frame_ == PowerFrame::peak_relative_db && max_power_db() != 0.0)
        throw Error("peak-relative profile must have its peak at 0 dB");
    if (threshold_db_) {
        if (frame_ != PowerFrame::peak_relative_db)
            throw Error("profile not normalized");
        if (!std::isfinite(*threshold_db_) || *threshold_db_ >= 0.0)
            throw Error("invalid threshold");
        for (const auto& tap : taps_)
            if (tap.power_db < *threshold_db_)
                throw Error("tap below recorded threshold");
    }
}

double PowerDelayProfile::max_power_db() const
{
    return std::max_element(taps_.begin(), taps_.end(),
                            [](const Tap& a, const Tap& b) { return a.power_db < b.power_db; })
        ->power_db;
}

std::vector<double> PowerDelayProfile::delays_ns() const
{
    std::vector<double> out;
    out.reserve(taps_.size());
    for (const auto& tap : taps_)
        out.push_back(tap.excess_delay_ns);
    return out;
}

std::vector<double> PowerDelayProfile::linear_powers() const
{
    std::vector<double> out;
    out.reserve(taps_.size());
    for (const auto& tap : taps_)
        out.push_back(db_to_linear(tap.power_db));
    return out;
}

PowerDelayProfile build_profile(std::span<const MultipathRecord> records, double bin_width_ns,
                                Combine combine, std::string source_id,
                                std::vector<std::string>* warnings)
{
    if (records.empty())
        throw Error("empty input");
    if (!std::isfinite(bin_width_ns) || bin_width_ns <= 0.0)
        throw Error("invalid bin width");
    for (const auto& record : records)
        validate(record);

    const double first_toa =
        std::min_element(records.begin(), records.end(), [](const auto& a, const auto& b) {
            return a.toa_s < b.toa_s;
        })->toa_s;

    struct Bin {
        double power = 0.0;       // sum of path powers [mW]
        double power_delay = 0.0; // sum of power * delay
        double re = 0.0;
        double im = 0.0;
    };
    std::map<std::int64_t, Bin> bins;

    for (const auto& record : records) {
        const double delay_ns = (record.toa_s - first_toa) * 1e9;
        const auto index = static_cast<std::int64_t>(std::floor(delay_ns / bin_width_ns));
        const double power = db_to_linear(record.power_dbm);
        auto& bin = bins[index];
        bin.power += power;
        bin.power_delay += power * delay_ns;
        if (combine == Combine::coherent) {
            const double amplitude = std::sqrt(power);
            const double phase = record.phase_deg * std::numbers::pi / 180.0;
            bin.re += amplitude * std::cos(phase);
            bin.im += amplitude * std::sin(phase);
        }
    }

    std::vector<Tap> taps;
    taps.reserve(bins.size());
    for (const auto& [index, bin] : bins) {
        double power = bin.power;
        if (combine == Combine::coherent) {
            power = bin.re * bin.re + bin.im * bin.im;
            if (power <= kCancellationFloor * bin.power) {
                if (warnings)
                    warnings->push_back(fmt::format(
                        "bin at {} ns cancelled by coherent combining; dropped",
                        static_cast<double>(index) * bin_width_ns));
                continue;
            }
        }
        taps.push_back({bin.power_delay / bin.power, linear_to_db(power)});
    }
    if (taps.empty())
        throw Error("all bins cancelled");

    return {std::move(taps), PowerFrame::absolute_dbm, std::nullopt, std::move(source_id)};
}

PowerDelayProfile normalize_to_peak(const PowerDelayProfile& pdp)
{
    const double peak = pdp.max_power_db();
    std::vector<Tap> taps = pdp.taps();
    for (auto& tap : taps)
        tap.power_db -= peak;
    return {std::move(taps), PowerFrame::peak_relative_db, pdp.threshold_db(), pdp.source_id()};
}

PowerDelayProfile apply_threshold(const PowerDelayProfile& pdp, double threshold_db)
{
    if (!std::isfinite(threshold_db) || threshold_db >= 0.0)
        throw Error("invalid threshold");
    if (pdp.frame() != PowerFrame::peak_relative_db)
        throw Error("profile not normalized");

    std::vector<Tap> taps;
    taps.reserve(pdp.size());
    std::copy_if(pdp.taps().begin(), pdp.taps().end(), std::back_inserter(taps),
                 [threshold_db](const Tap& tap) { return tap.power_db >= threshold_db; });

    const double recorded = pdp.threshold_db() ? std::max(*pdp.threshold_db(), threshold_db)
                                               : threshold_db;
    return {std::move(taps), PowerFrame::peak_relative_db, recorded, pdp.source_id()};
}

PowerDelayProfile rezero_delays(const PowerDelayProfile& pdp)
{
    const double origin = pdp.taps().front().excess_delay_ns;
    if (origin == 0.0)
        return pdp;
    std::vector<Tap> taps = pdp.taps();
    for (auto& tap : taps)
        tap.excess_delay_ns -= origin;
    return {std::move(taps), pdp.frame(), pdp.threshold_db(), pdp.source_id()};
}

PowerDelayProfile prepare(const PowerDelayProfile& pdp, double threshold_db)
{
    return rezero_delays(apply_threshold(normalize_to_peak(pdp), threshold_db));
}

const char* to_string(PowerFrame frame)
{
    return frame == PowerFrame::absolute_dbm ? "absolute_dbm" : "peak_relative_db";
}

PowerFrame parse_frame(const std::string& text)
{
    if (text == "absolute_dbm")
        return PowerFrame::absolute_dbm;
    if (text == "peak_relative_db")
        return PowerFrame::peak_relative_db;
    throw Error(fmt::format("unknown frame '{}'", text));
}

void write_pdp(std::ostream& out, const PowerDelayProfile& pdp)
{
    out << to_pdp_text(pdp);
}

std::string to_pdp_text(const PowerDelayProfile& pdp)
{
    std::string text = fmt::format(
        "# frame={} threshold_db={} source={}\n", to_string(pdp.frame()),
        pdp.threshold_db() ? fmt::format("{}", *pdp.threshold_db()) : std::string("none"),
        pdp.source_id());
    for (const auto& tap : pdp.taps())
        text += fmt::format("{},{}\n", tap.excess_delay_ns, tap.power_db);
    return text;
}

PowerDelayProfile read_pdp(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw Error("bad header: empty PDP file");

    // "# frame=... threshold_db=... source=<rest of line>"
    std::string_view header = detail::trim(line);
    if (header.empty() || header.front() != '#')
        throw Error("bad header: expected '# frame=...'");
    header.remove_prefix(1);
    header = detail::trim(header);

    const auto source_pos = header.find("source=");
    if (source_pos == std::string_view::npos)
        throw Error("bad header: missing source=");
    const std::string source(detail::trim(header.substr(source_pos + 7)));

    std::optional<PowerFrame> frame;
    std::optional<double> threshold;
    bool threshold_seen = false;
    for (const auto field : detail::split_ws(header.substr(0, source_pos))) {
        const auto eq = field.find('=');
        if (eq == std::string_view::npos)
            throw Error(fmt::format("bad header: field '{}'", field));
        const auto key = field.substr(0, eq);
        const auto value = field.substr(eq + 1);
        if (key == "frame") {
            frame = parse_frame(std::string(value));
        } else if (key == "threshold_db") {
            threshold_seen = true;
            if (value != "none") {
                threshold = detail::parse_double(value);
                if (!threshold)
                    throw Error(fmt::format("bad header: threshold_db '{}'", value));
            }
        } else {
            throw Error(fmt::format("bad header: unknown key '{}'", key));
        }
    }
    if (!frame || !threshold_seen)
        throw Error("bad header: frame and threshold_db are required");

    std::vector<Tap> taps;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = detail::trim(line);
        if (body.empty())
            continue;
        const auto fields = detail::split(body, ',');
        if (fields.size() != 2)
            throw Error(fmt::format("parse error at line {}: expected delay_ns,power_db", line_no));
        const auto delay = detail::parse_double(fields[0]);
        const auto power = detail::parse_double(fields[1]);
        if (!delay || !power)
            throw Error(fmt::format("parse error at line {}: non-numeric field", line_no));
        taps.push_back({*delay, *power});
    }
    return {std::move(taps), *frame, threshold, source};
}

PowerDelayProfile read_pdp_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(fmt::format("cannot open '{}'", path));
    return read_pdp(in);
}

void write_pdp_file(const std::string& path, const PowerDelayProfile& pdp)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(fmt::format("cannot write '{}'", path));
    write_pdp(out, pdp);
}

} // namespace pdpcmp
