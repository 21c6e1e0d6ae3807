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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pdpcmp {

/// One propagation path as exported by a ray tracer.
struct MultipathRecord {
    std::int64_t path_id = 0;
    double toa_s = 0.0;     ///< absolute time of arrival [s], >= 0
    double power_dbm = 0.0; ///< received power [dBm]
    double phase_deg = 0.0; ///< [0, 360)

    friend bool operator==(const MultipathRecord&, const MultipathRecord&) = default;
};

/// Throws Error if toa is negative/non-finite or power is non-finite.
void validate(const MultipathRecord& record);

struct Tap {
    double excess_delay_ns = 0.0;
    double power_db = 0.0; ///< dBm or dB relative to peak, see PowerDelayProfile::frame()

    friend bool operator==(const Tap&, const Tap&) = default;
};

enum class PowerFrame { absolute_dbm, peak_relative_db };

enum class Combine { noncoherent, coherent };

inline constexpr double kDefaultBinWidthNs = 1.0;
inline constexpr double kDefaultThresholdDb = -30.0;

double db_to_linear(double db);
double linear_to_db(double linear);

/// An ordered set of taps with strictly ascending delays.
///
/// The constructor enforces the class invariants: at least one tap, finite
/// non-negative delays, strictly ascending order, and in the peak-relative
/// frame a maximum power of exactly 0 dB. When a threshold is recorded every
/// tap lies at or above it.
class PowerDelayProfile {
public:
    PowerDelayProfile(std::vector<Tap> taps, PowerFrame frame,
                      std::optional<double> threshold_db = std::nullopt,
                      std::string source_id = {});

    const std::vector<Tap>& taps() const noexcept { return taps_; }
    std::size_t size() const noexcept { return taps_.size(); }
    PowerFrame frame() const noexcept { return frame_; }
    const std::optional<double>& threshold_db() const noexcept { return threshold_db_; }
    const std::string& source_id() const noexcept { return source_id_; }

    double max_power_db() const;
    std::vector<double> delays_ns() const;
    std::vector<double> linear_powers() const;

    friend bool operator==(const PowerDelayProfile&, const PowerDelayProfile&) = default;

private:
    std::vector<Tap> taps_;
    PowerFrame frame_;
    std::optional<double> threshold_db_;
    std::string source_id_;
};

/// Bins ray paths on a delay grid anchored at the earliest arrival.
///
/// Each non-empty bin becomes one tap placed at the power-weighted mean delay
/// of its paths. Noncoherent mode sums linear powers; coherent mode sums
/// complex amplitudes built from power and phase. Coherent bins whose power
/// falls to <= 1e-12 of the summed path powers are dropped and, when
/// `warnings` is given, reported there.
PowerDelayProfile build_profile(std::span<const MultipathRecord> records,
                                double bin_width_ns = kDefaultBinWidthNs,
                                Combine combine = Combine::noncoherent,
                                std::string source_id = {},
                                std::vector<std::string>* warnings = nullptr);

/// Shifts powers so the strongest tap sits at 0 dB. Idempotent.
PowerDelayProfile normalize_to_peak(const PowerDelayProfile& pdp);

/// Removes taps below `threshold_db` (< 0, relative to peak). The peak always survives.
PowerDelayProfile apply_threshold(const PowerDelayProfile& pdp, double threshold_db);

/// Shifts delays so the earliest tap sits at 0 ns.
PowerDelayProfile rezero_delays(const PowerDelayProfile& pdp);

/// normalize_to_peak -> apply_threshold -> rezero_delays.
PowerDelayProfile prepare(const PowerDelayProfile& pdp, double threshold_db = kDefaultThresholdDb);

const char* to_string(PowerFrame frame);
PowerFrame parse_frame(const std::string& text);

// Interchange text format:
//   # frame=<absolute_dbm|peak_relative_db> threshold_db=<value|none> source=<id>
//   delay_ns,power_db
//   ...
void write_pdp(std::ostream& out, const PowerDelayProfile& pdp);
std::string to_pdp_text(const PowerDelayProfile& pdp);
PowerDelayProfile read_pdp(std::istream& in);
PowerDelayProfile read_pdp_file(const std::string& path);
void write_pdp_file(const std::string& path, const PowerDelayProfile& pdp);

} // namespace pdpcmp
