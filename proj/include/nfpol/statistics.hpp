// SPDX-License-Identifier: Apache-2.0
//
// nfpol - near-field polarized focusing simulator
// Copyright (C) 2026 nfpol contributors
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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace nfpol
{
    // Box-plot summary of an empirical distribution.
    struct DistributionStats
    {
        double median = 0.0;
        double lower_quartile = 0.0;
        double upper_quartile = 0.0;
        double lower_whisker = 0.0;
        double upper_whisker = 0.0;
        std::size_t sample_count = 0;
    };

    // Quantile of sorted data by linear interpolation between order statistics at
    // position q (n - 1) (the "inclusive" method).
    inline double quantile_sorted(const std::vector<double> &sorted, double q)
    {
        if (sorted.empty())
            throw std::invalid_argument("quantile of an empty sample");
        const double pos = q * static_cast<double>(sorted.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
    }

    // Median and quartiles by linear interpolation; whiskers reach the most extreme samples
    // within 1.5 IQR of the box.
    inline DistributionStats box_stats(std::vector<double> samples)
    {
        if (samples.empty())
            throw std::invalid_argument("box statistics need at least one sample");
        std::sort(samples.begin(), samples.end());

        DistributionStats s;
        s.sample_count = samples.size();
        s.median = quantile_sorted(samples, 0.5);
        s.lower_quartile = quantile_sorted(samples, 0.25);
        s.upper_quartile = quantile_sorted(samples, 0.75);

        const double iqr = s.upper_quartile - s.lower_quartile;
        const double lo_fence = s.lower_quartile - 1.5 * iqr;
        const double hi_fence = s.upper_quartile + 1.5 * iqr;
        s.lower_whisker = *std::lower_bound(samples.begin(), samples.end(), lo_fence);
        s.upper_whisker = *(std::upper_bound(samples.begin(), samples.end(), hi_fence) - 1);
        // Interpolated quartiles can sit outside the retained samples when data are sparse.
        s.lower_whisker = std::min(s.lower_whisker, s.lower_quartile);
        s.upper_whisker = std::max(s.upper_whisker, s.upper_quartile);
        return s;
    }
}
