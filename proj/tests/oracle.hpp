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

// Independent reference implementations used only by tests. They work on raw
// (delay, dB) arrays in long double and share no code with the library.

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace oracle {

struct Point {
    long double delay;
    long double db;
};

struct Moments {
    long double mean_weighted = 0;
    long double mean_unweighted = 0;
    long double rms_weighted = 0;
    long double rms_unweighted = 0;
    long double max_excess = 0;
    std::size_t count = 0;
};

inline long double lin(long double db) { return std::exp(db * std::log(10.0L) / 10.0L); }

/// Peak-normalize, drop points below threshold, re-zero, then take moments by
/// direct summation.
inline Moments moments(std::vector<Point> pts, long double threshold_db)
{
    long double peak = pts[0].db;
    for (const auto& p : pts)
        if (p.db > peak)
            peak = p.db;
    std::vector<Point> kept;
    for (const auto& p : pts)
        if (p.db - peak >= threshold_db)
            kept.push_back({p.delay, p.db - peak});
    long double origin = kept[0].delay;
    long double last = kept[0].delay;
    for (const auto& p : kept) {
        if (p.delay < origin)
            origin = p.delay;
        if (p.delay > last)
            last = p.delay;
    }

    Moments m;
    m.count = kept.size();
    m.max_excess = last - origin;
    long double w_sum = 0, w_first = 0, u_first = 0;
    for (const auto& p : kept) {
        const long double t = p.delay - origin;
        w_sum += lin(p.db);
        w_first += lin(p.db) * t;
        u_first += t;
    }
    m.mean_weighted = w_first / w_sum;
    m.mean_unweighted = u_first / static_cast<long double>(kept.size());
    long double w_second = 0, u_second = 0;
    for (const auto& p : kept) {
        const long double t = p.delay - origin;
        w_second += lin(p.db) * (t - m.mean_weighted) * (t - m.mean_weighted);
        u_second += (t - m.mean_unweighted) * (t - m.mean_unweighted);
    }
    m.rms_weighted = std::sqrt(w_second / w_sum);
    m.rms_unweighted = std::sqrt(u_second / static_cast<long double>(kept.size()));
    return m;
}

/// sum p ln(p/q) / ln 2, skipping p = 0 terms.
inline long double kl_bits(const std::vector<double>& p, const std::vector<double>& q)
{
    long double acc = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] > 0)
            acc += static_cast<long double>(p[i]) *
                   (std::log(static_cast<long double>(p[i])) - std::log(static_cast<long double>(q[i])));
    return acc / std::log(2.0L);
}

inline bool close(long double a, long double b, long double rel)
{
    const long double scale = std::fabs(b) > 1 ? std::fabs(b) : 1;
    return std::fabs(a - b) <= rel * scale;
}

} // namespace oracle
