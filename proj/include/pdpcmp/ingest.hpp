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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace pdpcmp {

/// All paths seen by one receiver from one transmitter.
struct PathDataset {
    std::int64_t receiver_id = 0;
    std::string transmitter_id;
    std::vector<MultipathRecord> records;

    friend bool operator==(const PathDataset&, const PathDataset&) = default;
};

struct RowReject {
    std::size_t line = 0;
    std::string reason;
};

struct ParsedPaths {
    std::vector<PathDataset> datasets; ///< one per (tx, rx), in order of first appearance
    std::vector<RowReject> rejects;
    std::size_t data_rows = 0; ///< == total records + rejects.size()
};

/// strict: throw on the first malformed row. lenient: collect it in `rejects`.
enum class ParseMode { strict, lenient };

inline constexpr std::string_view kPathsCsvHeader = "tx_id,rx_id,path_id,toa_s,power_dbm,phase_deg";

/// Canonical path CSV (header `tx_id,rx_id,path_id,toa_s,power_dbm,phase_deg`).
ParsedPaths parse_paths_csv(std::istream& in, ParseMode mode = ParseMode::strict);
ParsedPaths parse_paths_csv_file(const std::string& path, ParseMode mode = ParseMode::strict);

/// Writes datasets in canonical CSV with round-trip precision.
void write_paths_csv(std::ostream& out, const std::vector<PathDataset>& datasets);

/// Best-effort reader for whitespace-delimited impulse-response exports.
///
/// Layout:
///
///     # any comment
///     # tx: O2I_Tx1
///     # rx: 484
///     # columns: path_id toa_s power_dbm phase_deg interactions
///     1  2.21e-07  -81.2  123.4  2
///
/// `# rx:` starts a new receiver block; `# columns:` may appear once per file
/// or be redeclared. Columns named other than the four required ones (or
/// their aliases path/toa/power/phase) are ignored. Data before any
/// `# columns:` line is rejected as "unknown layout".
ParsedPaths parse_insite_cir(std::istream& in, ParseMode mode = ParseMode::strict);

struct SyntheticSpec {
    int n_paths = 20;
    double decay_constant_ns = 50.0;
    double max_excess_ns = 500.0;
    double base_power_dbm = -70.0;
    std::uint64_t seed = 1;
    double ripple_db = 1.0; ///< uniform power ripple bound, not applied to the first path
};

/// Exponentially decaying synthetic arrivals; identical spec gives identical output
/// on every platform.
///
/// The first path arrives at excess delay 0 with exactly `base_power_dbm`.
PathDataset generate_synthetic(const SyntheticSpec& spec, std::int64_t receiver_id = 0,
                               std::string transmitter_id = "synthetic");

} // namespace pdpcmp
