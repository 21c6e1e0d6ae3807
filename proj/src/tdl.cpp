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

#include "pdpcmp/tdl.hpp"

#include "pdpcmp/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>

namespace pdpcmp {

namespace {

// TR 38.901 Table 7.7.2-1 (TDL-A), rows sorted by normalized delay.
constexpr std::array<TdlTableTap, 23> kTdlA{{
    {1, 0.0000, -13.4},
    {2, 0.3819, 0.0},
    {3, 0.4025, -2.2},
    {5, 0.4610, -6.0},
    {6, 0.5375, -8.2},
    {8, 0.5750, -10.5},
    {4, 0.5868, -4.0},
    {7, 0.6708, -9.9},
    {9, 0.7618, -7.5},
    {10, 1.5375, -15.9},
    {11, 1.8978, -6.6},
    {13, 2.1718, -12.4},
    {12, 2.2242, -16.7},
    {14, 2.4942, -15.2},
    {15, 2.5119, -10.8},
    {16, 3.0582, -11.3},
    {17, 4.0810, -12.7},
    {18, 4.4579, -16.2},
    {19, 4.5695, -18.3},
    {20, 4.7966, -18.9},
    {21, 5.0066, -16.6},
    {22, 5.3043, -19.9},
    {23, 9.6586, -29.7},
}};

// TR 38.901 Table 7.7.2-2 (TDL-B), rows sorted by normalized delay.
constexpr std::array<TdlTableTap, 23> kTdlB{{
    {1, 0.0000, 0.0},
    {2, 0.1072, -2.2},
    {4, 0.2095, -3.2},
    {3, 0.2155, -4.0},
    {5, 0.2870, -9.8},
    {6, 0.2986, -1.2},
    {9, 0.3681, -7.6},
    {10, 0.3697, -3.0},
    {7, 0.3752, -3.4},
    {8, 0.5055, -5.2},
    {12, 0.5283, -9.0},
    {11, 0.5700, -8.9},
    {13, 1.1021, -4.8},
    {14, 1.2756, -5.7},
    {15, 1.5474, -7.5},
    {16, 1.7842, -1.9},
    {17, 2.0169, -7.6},
    {18, 2.8294, -12.2},
    {19, 3.0219, -9.8},
    {20, 3.6187, -11.4},
    {21, 4.1067, -14.9},
    {22, 4.2790, -9.2},
    {23, 4.7834, -11.3},
}};

// TR 38.901 Table 7.7.2-3 (TDL-C), rows sorted by normalized delay.
constexpr std::array<TdlTableTap, 24> kTdlC{{
    {1, 0.0000, -4.4},
    {2, 0.2099, -1.2},
    {5, 0.2176, -2.5},
    {3, 0.2219, -3.5},
    {4, 0.2329, -5.2},
    {6, 0.6366, 0.0},
    {7, 0.6448, -2.2},
    {8, 0.6560, -3.9},
    {9, 0.6584, -7.4},
    {10, 0.7935, -7.1},
    {11, 0.8213, -10.7},
    {12, 0.9336, -11.1},
    {13, 1.2285, -5.1},
    {14, 1.3083, -6.8},
    {15, 2.1704, -8.7},
    {16, 2.7105, -13.2},
    {17, 4.2589, -13.9},
    {18, 4.6003, -13.9},
    {19, 5.4902, -15.8},
    {20, 5.6077, -17.1},
    {21, 6.3065, -16.0},
    {22, 6.6374, -15.7},
    {23, 7.0427, -21.6},
    {24, 8.6523, -22.8},
}};

const TdlModelTable kTables[] = {
    {TdlModel::A, kTdlA},
    {TdlModel::B, kTdlB},
    {TdlModel::C, kTdlC},
};

constexpr std::array<ScenarioPreset, 6> kPresets{{
    {Scenario::UMi_O2I, TdlModel::A, DelayProfileLabel::Normal, 240.0},
    {Scenario::I2I, TdlModel::A, DelayProfileLabel::Normal, 36.0},
    {Scenario::UMi_O2I, TdlModel::B, DelayProfileLabel::Normal, 240.0},
    {Scenario::I2I, TdlModel::B, DelayProfileLabel::Normal, 36.0},
    {Scenario::UMi_O2I, TdlModel::C, DelayProfileLabel::Long, 616.0},
    {Scenario::I2I, TdlModel::C, DelayProfileLabel::Long, 57.0},
}};

std::string normalize_token(std::string_view text)
{
    std::string out;
    for (const char c : text) {
        if (c == '-' || c == '_' || c == ' ')
            continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

} // namespace

const TdlModelTable& model_table(TdlModel id)
{
    return kTables[static_cast<int>(id)];
}

PowerDelayProfile scaled_profile(TdlModel id, double ds_ns)
{
    if (!std::isfinite(ds_ns) || ds_ns <= 0.0)
        throw Error("invalid delay spread");
    const auto& table = model_table(id);
    std::vector<Tap> taps;
    taps.reserve(table.taps.size());
    for (const auto& row : table.taps)
        taps.push_back({ds_ns * row.normalized_delay, row.power_db});
    return {std::move(taps), PowerFrame::peak_relative_db, std::nullopt,
            fmt::format("{}@{}ns", to_string(id), ds_ns)};
}

double preset_ds(Scenario scenario, TdlModel model)
{
    const auto it = std::find_if(kPresets.begin(), kPresets.end(), [&](const ScenarioPreset& p) {
        return p.scenario == scenario && p.model == model;
    });
    if (it == kPresets.end())
        throw Error("no preset");
    return it->ds_ns;
}

std::span<const ScenarioPreset> presets() { return kPresets; }

double normalization_check(TdlModel id)
{
    const auto& taps = model_table(id).taps;
    double total = 0.0;
    double first = 0.0;
    for (const auto& row : taps) {
        const double p = db_to_linear(row.power_db);
        total += p;
        first += p * row.normalized_delay;
    }
    const double mean = first / total;
    double second = 0.0;
    for (const auto& row : taps) {
        const double d = row.normalized_delay - mean;
        second += db_to_linear(row.power_db) * d * d;
    }
    return std::sqrt(second / total);
}

std::string to_string(TdlModel id)
{
    switch (id) {
    case TdlModel::A: return "TDL-A";
    case TdlModel::B: return "TDL-B";
    case TdlModel::C: return "TDL-C";
    }
    return "TDL-?";
}

std::string to_string(Scenario scenario)
{
    return scenario == Scenario::UMi_O2I ? "UMi_O2I" : "I2I";
}

std::string to_string(DelayProfileLabel label)
{
    return label == DelayProfileLabel::Normal ? "Normal" : "Long";
}

TdlModel parse_model(std::string_view text)
{
    auto token = normalize_token(text);
    if (token.starts_with("tdl"))
        token.erase(0, 3);
    if (token == "a")
        return TdlModel::A;
    if (token == "b")
        return TdlModel::B;
    if (token == "c")
        return TdlModel::C;
    throw Error(fmt::format("unknown TDL model '{}'", text));
}

Scenario parse_scenario(std::string_view text)
{
    const auto token = normalize_token(text);
    if (token == "umio2i" || token == "o2i")
        return Scenario::UMi_O2I;
    if (token == "i2i")
        return Scenario::I2I;
    throw Error(fmt::format("unknown scenario '{}'", text));
}

} // namespace pdpcmp
