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

#include "pdpcmp/metrics.hpp"

#include "pdpcmp/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace pdpcmp {

namespace {

std::vector<double> weights(const PowerDelayProfile& pdp, MeanMode mode)
{
    if (mode == MeanMode::power_weighted)
        return pdp.linear_powers();
    return std::vector<double>(pdp.size(), 1.0);
}

double weighted_mean(const std::vector<Tap>& taps, const std::vector<double>& w)
{
    double total = 0.0;
    double acc = 0.0;
    for (std::size_t k = 0; k < taps.size(); ++k) {
        total += w[k];
        acc += w[k] * taps[k].excess_delay_ns;
    }
    return acc / total;
}

} // namespace

double mean_excess_delay(const PowerDelayProfile& pdp, MeanMode mode)
{
    return weighted_mean(pdp.taps(), weights(pdp, mode));
}

double rms_delay_spread(const PowerDelayProfile& pdp, MeanMode mode)
{
    if (pdp.size() == 1)
        return 0.0;
    const auto w = weights(pdp, mode);
    const auto& taps = pdp.taps();
    const double mean = weighted_mean(taps, w);
    double total = 0.0;
    double acc = 0.0;
    for (std::size_t k = 0; k < taps.size(); ++k) {
        const double d = taps[k].excess_delay_ns - mean;
        total += w[k];
        acc += w[k] * d * d;
    }
    return std::sqrt(acc / total);
}

double effective_max_delay(const PowerDelayProfile& pdp, double threshold_db)
{
    if (pdp.frame() != PowerFrame::peak_relative_db)
        throw Error("profile not normalized");
    double first = std::numeric_limits<double>::infinity();
    double last = -std::numeric_limits<double>::infinity();
    for (const auto& tap : pdp.taps()) {
        if (tap.power_db < threshold_db)
            continue;
        first = std::min(first, tap.excess_delay_ns);
        last = std::max(last, tap.excess_delay_ns);
    }
    // The 0 dB peak survives any threshold <= 0.
    if (!(last >= first))
        return 0.0;
    return last - first;
}

DelayMetrics summarize(const PowerDelayProfile& pdp, double threshold_db, MeanMode mean_mode)
{
    if (pdp.frame() != PowerFrame::peak_relative_db)
        throw Error("profile not normalized");
    const auto kept = rezero_delays(apply_threshold(pdp, threshold_db));
    DelayMetrics m;
    m.rms_ds_ns = rms_delay_spread(kept, MeanMode::power_weighted);
    m.mean_excess_ns = mean_excess_delay(kept, mean_mode);
    m.mean_mode = mean_mode;
    m.eff_max_ns = effective_max_delay(kept, threshold_db);
    m.threshold_db = threshold_db;
    m.tap_count = kept.size();
    return m;
}

const char* to_string(MeanMode mode)
{
    return mode == MeanMode::power_weighted ? "power_weighted" : "unweighted";
}

MeanMode parse_mean_mode(std::string_view text)
{
    if (text == "power_weighted" || text == "weighted" || text == "power-weighted")
        return MeanMode::power_weighted;
    if (text == "unweighted")
        return MeanMode::unweighted;
    throw Error(fmt::format("unknown mean mode '{}'", text));
}

} // namespace pdpcmp
