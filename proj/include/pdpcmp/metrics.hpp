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

#include "pdpcmp/pdp.hpp"

#include <cstddef>
#include <string_view>

namespace pdpcmp {

/// Textbook moments weight each tap by its linear power; the unweighted
/// arithmetic mean of tap delays is what reproduces the published TDL
/// reference table (e.g. 240 ns x 2.52815 = 606.76 ns for TDL-A).
enum class MeanMode { power_weighted, unweighted };

struct DelayMetrics {
    double rms_ds_ns = 0.0; ///< always power-weighted
    double mean_excess_ns = 0.0;
    MeanMode mean_mode = MeanMode::power_weighted;
    double eff_max_ns = 0.0;
    double threshold_db = kDefaultThresholdDb;
    std::size_t tap_count = 0;
};

double mean_excess_delay(const PowerDelayProfile& pdp, MeanMode mode = MeanMode::power_weighted);

/// Square root of the second central moment about the mean of the same mode.
double rms_delay_spread(const PowerDelayProfile& pdp, MeanMode mode = MeanMode::power_weighted);

/// Span between the earliest and latest taps at or above `threshold_db` (peak-relative).
double effective_max_delay(const PowerDelayProfile& pdp, double threshold_db = kDefaultThresholdDb);

/// Thresholds and re-zeros a peak-relative profile, then computes every metric
/// from the surviving taps.
DelayMetrics summarize(const PowerDelayProfile& pdp, double threshold_db = kDefaultThresholdDb,
                       MeanMode mean_mode = MeanMode::power_weighted);

const char* to_string(MeanMode mode);
MeanMode parse_mean_mode(std::string_view text);

} // namespace pdpcmp
