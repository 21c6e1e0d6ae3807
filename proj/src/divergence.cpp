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

#include "pdpcmp/divergence.hpp"

#include "pdpcmp/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace pdpcmp {

namespace {

constexpr double kMaxBins = 1e8;

// Nearest bin index as a real number; caller range-checks.
double bin_position(const DelayGrid& grid, double delay_ns)
{
    return std::floor((delay_ns - grid.start_ns) / grid.step_ns + 0.5);
}

void check_grid(const DelayGrid& grid)
{
    if (!std::isfinite(grid.step_ns) || grid.step_ns <= 0.0)
        throw Error("invalid grid step");
    if (grid.n_bins < 2)
        throw Error("grid too small");
}

std::vector<double> nearest_bin(const PowerDelayProfile& pdp, const DelayGrid& grid)
{
    std::vector<double> out(grid.n_bins, 0.0);
    for (const auto& tap : pdp.taps())
        out[static_cast<std::size_t>(bin_position(grid, tap.excess_delay_ns))] +=
            db_to_linear(tap.power_db);
    return out;
}

std::vector<double> interpolate(const PowerDelayProfile& pdp, const DelayGrid& grid)
{
    const auto& taps = pdp.taps();
    std::vector<double> out(grid.n_bins, 0.0);
    if (taps.size() < 2)
        return nearest_bin(pdp, grid);

    std::size_t seg = 0;
    bool any = false;
    for (std::size_t i = 0; i < grid.n_bins; ++i) {
        const double x = grid.center(i);
        if (x < taps.front().excess_delay_ns || x > taps.back().excess_delay_ns)
            continue;
        while (seg + 2 < taps.size() && x > taps[seg + 1].excess_delay_ns)
            ++seg;
        const auto& lo = taps[seg];
        const auto& hi = taps[seg + 1];
        const double p_lo = db_to_linear(lo.power_db);
        const double p_hi = db_to_linear(hi.power_db);
        const double t = (x - lo.excess_delay_ns) / (hi.excess_delay_ns - lo.excess_delay_ns);
        out[i] = p_lo + (p_hi - p_lo) * t;
        any = any || out[i] > 0.0;
    }
    if (!any)
        return nearest_bin(pdp, grid);
    return out;
}

} // namespace

DelayGrid union_grid(const PowerDelayProfile& a, const PowerDelayProfile& b, double step_ns)
{
    if (!std::isfinite(step_ns) || step_ns <= 0.0)
        throw Error("invalid grid step");
    const double start =
        std::min(a.taps().front().excess_delay_ns, b.taps().front().excess_delay_ns);
    const double end = std::max(a.taps().back().excess_delay_ns, b.taps().back().excess_delay_ns);
    const double span_bins = std::floor((end - start) / step_ns + 0.5) + 1.0;
    if (span_bins > kMaxBins)
        throw Error(fmt::format("grid too large: {} bins at step {} ns", span_bins, step_ns));
    return {start, step_ns, std::max<std::size_t>(2, static_cast<std::size_t>(span_bins))};
}

std::vector<double> resample(const PowerDelayProfile& pdp, const DelayGrid& grid,
                             Resampling method)
{
    check_grid(grid);
    for (const auto& tap : pdp.taps()) {
        const double pos = bin_position(grid, tap.excess_delay_ns);
        if (pos < 0.0 || pos >= static_cast<double>(grid.n_bins))
            throw Error(fmt::format("grid too small: tap at {} ns outside [{}, {}] ns",
                                    tap.excess_delay_ns, grid.start_ns, grid.end_ns()));
    }
    return method == Resampling::bin_accumulate ? nearest_bin(pdp, grid) : interpolate(pdp, grid);
}

ProbabilityMass to_probability(std::span<const double> values, double epsilon,
                               std::optional<DelayGrid> grid)
{
    if (!std::isfinite(epsilon) || epsilon <= 0.0)
        throw Error("invalid epsilon");
    if (grid && grid->n_bins != values.size())
        throw Error("incompatible supports");
    double total = 0.0;
    for (const double v : values) {
        if (!std::isfinite(v) || v < 0.0)
            throw Error("negative or non-finite mass");
        total += v;
    }
    if (!(total > 0.0))
        throw Error("degenerate distribution");

    const double floor = epsilon * total;
    ProbabilityMass out{{values.begin(), values.end()}, epsilon, grid};
    double floored_total = 0.0;
    for (auto& m : out.masses) {
        m = std::max(m, floor);
        floored_total += m;
    }
    for (auto& m : out.masses)
        m /= floored_total;
    return out;
}

double kl_bits(const ProbabilityMass& p, const ProbabilityMass& q)
{
    if (p.masses.size() != q.masses.size() || (p.grid && q.grid && *p.grid != *q.grid))
        throw Error("incompatible supports");
    double bits = 0.0;
    for (std::size_t i = 0; i < p.masses.size(); ++i) {
        const double pi = p.masses[i];
        if (pi > 0.0)
            bits += pi * std::log2(pi / q.masses[i]);
    }
    return bits;
}

KlResult compare(const PowerDelayProfile& reference, const PowerDelayProfile& approx,
                 double step_ns, double epsilon, Resampling method)
{
    if (reference.frame() != PowerFrame::peak_relative_db ||
        approx.frame() != PowerFrame::peak_relative_db)
        throw Error("profile not normalized");
    const auto grid = union_grid(reference, approx, step_ns);
    const auto p = to_probability(resample(reference, grid, method), epsilon, grid);
    const auto q = to_probability(resample(approx, grid, method), epsilon, grid);
    return {kl_bits(p, q), grid, epsilon, method, reference.source_id(), approx.source_id()};
}

const char* to_string(Resampling method)
{
    return method == Resampling::bin_accumulate ? "bin_accumulate" : "linear_interp";
}

Resampling parse_resampling(std::string_view text)
{
    if (text == "bin_accumulate" || text == "bin")
        return Resampling::bin_accumulate;
    if (text == "linear_interp" || text == "linear")
        return Resampling::linear_interp;
    throw Error(fmt::format("unknown resampling method '{}'", text));
}

} // namespace pdpcmp
