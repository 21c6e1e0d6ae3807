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

#include <span>
#include <string>
#include <string_view>

namespace pdpcmp {

/// NLOS tapped-delay-line models of 3GPP TR 38.901.
enum class TdlModel { A, B, C };

struct TdlTableTap {
    int tap_number = 0;            ///< 1-based row number in the published table
    double normalized_delay = 0.0; ///< delay for unit RMS delay spread
    double power_db = 0.0;
};

/// A normalized TDL table, ordered by delay.
///
/// The published tables list a few taps out of delay order (TDL-A taps 4/5 for
/// example); `tap_number` keeps the published row so the original listing can
/// be reconstructed.
struct TdlModelTable {
    TdlModel id;
    std::span<const TdlTableTap> taps;
    std::string_view fading_tag = "NLOS-Rayleigh";
};

enum class Scenario { UMi_O2I, I2I };

enum class DelayProfileLabel { Normal, Long };

struct ScenarioPreset {
    Scenario scenario;
    TdlModel model;
    DelayProfileLabel profile_label;
    double ds_ns;
};

const TdlModelTable& model_table(TdlModel id);

/// Delays scaled by `ds_ns`, powers copied, peak-relative frame, no threshold.
PowerDelayProfile scaled_profile(TdlModel id, double ds_ns);

/// Desired delay spread for the comparison presets; throws "no preset".
double preset_ds(Scenario scenario, TdlModel model);

std::span<const ScenarioPreset> presets();

/// Power-weighted RMS spread of the normalized delays. Should be ~1.
double normalization_check(TdlModel id);

std::string to_string(TdlModel id); ///< "TDL-A"
std::string to_string(Scenario scenario);
std::string to_string(DelayProfileLabel label);

/// Accepts "A", "a", "TDL-A", "tdl_a".
TdlModel parse_model(std::string_view text);
/// Accepts "UMi_O2I", "umi-o2i", "o2i", "I2I", "i2i".
Scenario parse_scenario(std::string_view text);

} // namespace pdpcmp
