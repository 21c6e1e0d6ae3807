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

#include "pdpcmp/error.hpp"
#include "pdpcmp/metrics.hpp"
#include "pdpcmp/tdl.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace pdpcmp;

TEST_CASE("model_table: transcription checks")
{
    const auto& a = model_table(TdlModel::A);
    const auto& b = model_table(TdlModel::B);
    const auto& c = model_table(TdlModel::C);
    CHECK(a.taps.size() == 23);
    CHECK(b.taps.size() == 23);
    CHECK(c.taps.size() == 24);

    // weakest TDL-A tap sits just above the -30 dB threshold
    const auto weakest = std::min_element(a.taps.begin(), a.taps.end(), [](auto& x, auto& y) {
        return x.power_db < y.power_db;
    });
    CHECK(weakest->power_db == -29.7);

    CHECK(b.taps.front().normalized_delay == 0.0);
    CHECK(b.taps.front().power_db == 0.0);
    CHECK(c.taps.back().normalized_delay * 57.0 == doctest::Approx(493.18).epsilon(0.02 / 493.18));

    for (const auto id : {TdlModel::A, TdlModel::B, TdlModel::C}) {
        const auto& t = model_table(id);
        CHECK(t.id == id);
        CHECK(t.fading_tag == "NLOS-Rayleigh");
        CHECK(t.taps.front().normalized_delay == 0.0);
        int zero_db = 0;
        std::set<int> numbers;
        for (std::size_t k = 0; k < t.taps.size(); ++k) {
            CHECK(t.taps[k].power_db <= 0.0);
            zero_db += t.taps[k].power_db == 0.0;
            numbers.insert(t.taps[k].tap_number);
            if (k > 0)
                CHECK(t.taps[k].normalized_delay > t.taps[k - 1].normalized_delay);
        }
        CHECK(zero_db == 1);
        // every published row present exactly once
        CHECK(numbers.size() == t.taps.size());
        CHECK(*numbers.begin() == 1);
        CHECK(*numbers.rbegin() == static_cast<int>(t.taps.size()));
    }
}

TEST_CASE("normalization_check: unit RMS spread")
{
    for (const auto id : {TdlModel::A, TdlModel::B, TdlModel::C}) {
        const double rms = normalization_check(id);
        CHECK(rms >= 0.98);
        CHECK(rms <= 1.02);
    }
}

TEST_CASE("scaled_profile")
{
    const auto a36 = scaled_profile(TdlModel::A, 36.0);
    CHECK(a36.frame() == PowerFrame::peak_relative_db);
    CHECK_FALSE(a36.threshold_db().has_value());
    CHECK(a36.taps().back().excess_delay_ns == doctest::Approx(347.71).epsilon(0.02 / 347.71));
    CHECK(scaled_profile(TdlModel::B, 36.0).taps().back().excess_delay_ns ==
          doctest::Approx(172.20).epsilon(0.02 / 172.20));

    for (const auto id : {TdlModel::A, TdlModel::B, TdlModel::C}) {
        const auto one = scaled_profile(id, 50.0);
        const auto two = scaled_profile(id, 100.0);
        REQUIRE(one.size() == two.size());
        for (std::size_t k = 0; k < one.size(); ++k) {
            CHECK(two.taps()[k].excess_delay_ns == 2.0 * one.taps()[k].excess_delay_ns);
            CHECK(two.taps()[k].power_db == one.taps()[k].power_db);
        }
    }

    CHECK_THROWS_WITH_AS(scaled_profile(TdlModel::C, 0.0), "invalid delay spread", Error);
    CHECK_THROWS_WITH_AS(scaled_profile(TdlModel::C, -1.0), "invalid delay spread", Error);
}

TEST_CASE("scaling linearity of metrics and peak index")
{
    for (const auto id : {TdlModel::A, TdlModel::B, TdlModel::C}) {
        for (const double k : {0.5, 2.0, 3.7}) {
            const auto base = scaled_profile(id, 40.0);
            const auto scaled = scaled_profile(id, 40.0 * k);
            for (const auto mode : {MeanMode::power_weighted, MeanMode::unweighted}) {
                const auto m1 = summarize(base, -30.0, mode);
                const auto m2 = summarize(scaled, -30.0, mode);
                CHECK(m2.rms_ds_ns == doctest::Approx(k * m1.rms_ds_ns).epsilon(1e-12));
                CHECK(m2.mean_excess_ns == doctest::Approx(k * m1.mean_excess_ns).epsilon(1e-12));
                CHECK(m2.eff_max_ns == doctest::Approx(k * m1.eff_max_ns).epsilon(1e-12));
            }
            const auto peak = [](const PowerDelayProfile& p) {
                return std::max_element(p.taps().begin(), p.taps().end(),
                                        [](auto& x, auto& y) { return x.power_db < y.power_db; }) -
                       p.taps().begin();
            };
            CHECK(peak(base) == peak(scaled));
        }
    }
}

TEST_CASE("preset_ds")
{
    CHECK(preset_ds(Scenario::UMi_O2I, TdlModel::C) == 616.0);
    CHECK(preset_ds(Scenario::I2I, TdlModel::A) == 36.0);
    CHECK(preset_ds(Scenario::I2I, TdlModel::C) == 57.0);
    CHECK(preset_ds(Scenario::UMi_O2I, TdlModel::A) == 240.0);
    CHECK(preset_ds(Scenario::UMi_O2I, TdlModel::B) == 240.0);
    CHECK(preset_ds(Scenario::I2I, TdlModel::B) == 36.0);
    CHECK_THROWS_WITH_AS(preset_ds(static_cast<Scenario>(7), TdlModel::A), "no preset", Error);

    CHECK(presets().size() == 6);
    for (const auto& p : presets())
        CHECK(p.profile_label ==
              (p.model == TdlModel::C ? DelayProfileLabel::Long : DelayProfileLabel::Normal));
}

TEST_CASE("unweighted mean is consistent across scenarios")
{
    const double m240 = mean_excess_delay(scaled_profile(TdlModel::A, 240.0), MeanMode::unweighted);
    const double m36 = mean_excess_delay(scaled_profile(TdlModel::A, 36.0), MeanMode::unweighted);
    CHECK(m240 == doctest::Approx(606.76).epsilon(0.02 / 606.76));
    CHECK(m36 == doctest::Approx(91.013).epsilon(0.02 / 91.013));
    CHECK(m240 / 240.0 == doctest::Approx(m36 / 36.0).epsilon(1e-14));
}

TEST_CASE("name parsing")
{
    CHECK(parse_model("A") == TdlModel::A);
    CHECK(parse_model("tdl-b") == TdlModel::B);
    CHECK(parse_model("TDL_C") == TdlModel::C);
    CHECK_THROWS_AS(parse_model("D"), Error);
    CHECK(parse_scenario("umi-o2i") == Scenario::UMi_O2I);
    CHECK(parse_scenario("UMi_O2I") == Scenario::UMi_O2I);
    CHECK(parse_scenario("i2i") == Scenario::I2I);
    CHECK_THROWS_AS(parse_scenario("uma"), Error);
    CHECK(to_string(TdlModel::B) == "TDL-B");
}
