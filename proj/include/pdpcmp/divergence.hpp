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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pdpcmp {

/// Uniform delay grid; bin i is centred on start_ns + i * step_ns.
struct DelayGrid {
    double start_ns = 0.0;
    double step_ns = 1.0;
    std::size_t n_bins = 2;

    double center(std::size_t i) const { return start_ns + static_cast<double>(i) * step_ns; }
    double end_ns() const { return center(n_bins - 1); }

    friend bool operator==(const DelayGrid&, const DelayGrid&) = default;
};

enum class Resampling { bin_accumulate, linear_interp };

struct ProbabilityMass {
    std::vector<double> masses;
    double epsilon = 0.0;
    std::optional<DelayGrid> grid;
};

struct KlResult {
    double bits = 0.0;
    DelayGrid grid;
    double epsilon = 0.0;
    Resampling method = Resampling::bin_accumulate;
    std::string reference_id;
    std::string approx_id;
};

inline constexpr double kDefaultGridStepNs = 1.0;
inline constexpr double kDefaultEpsilon = 1e-10;

/// Smallest grid of the given step that starts at the earliest tap of either
/// profile and covers the latest one.
DelayGrid union_grid(const PowerDelayProfile& a, const PowerDelayProfile& b,
                     double step_ns = kDefaultGridStepNs);

/// Linear power per grid bin.
///
/// bin_accumulate puts each tap's full linear power into its nearest bin and
/// conserves total power. linear_interp samples the polyline through the taps
/// at bin centres (zero outside the first..last tap span); if that misses every
/// bin the result falls back to nearest-bin assignment.
std::vector<double> resample(const PowerDelayProfile& pdp, const DelayGrid& grid,
                             Resampling method = Resampling::bin_accumulate);

/// Floors each value at epsilon * sum(values) and renormalizes to unit mass.
ProbabilityMass to_probability(std::span<const double> values, double epsilon = kDefaultEpsilon,
                               std::optional<DelayGrid> grid = std::nullopt);

/// D(p || q) in bits.
double kl_bits(const ProbabilityMass& p, const ProbabilityMass& q);

/// D(reference || approx) in bits over the union grid of both profiles.
KlResult compare(const PowerDelayProfile& reference, const PowerDelayProfile& approx,
                 double step_ns = kDefaultGridStepNs, double epsilon = kDefaultEpsilon,
                 Resampling method = Resampling::bin_accumulate);

const char* to_string(Resampling method);
Resampling parse_resampling(std::string_view text);

} // namespace pdpcmp
