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

#include "nfpol/beamforming.hpp"
#include "nfpol/channel.hpp"
#include "nfpol/geometry.hpp"
#include "nfpol/parallel.hpp"
#include "nfpol/statistics.hpp"

#include <cmath>
#include <cstddef>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace nfpol
{
    using WarningSink = std::function<void(const std::string &)>;

    inline void warn_to_stderr(const std::string &message) { std::cerr << "warning: " << message << '\n'; }

    struct NarrowbandCheck
    {
        double delay_spread = 0.0; // seconds
        bool valid = true;
    };

    // Boresight delay spread (sqrt(d^2 + R^2) - d) / c of an aperture of radius R seen from
    // distance d. The channel counts as narrowband when the spread is below margin / B.
    inline NarrowbandCheck narrowband_check(double distance, double radius, double bandwidth, double margin = 0.1)
    {
        check_positive(distance, "distance");
        check_positive(bandwidth, "bandwidth");
        check_positive(margin, "narrowband margin");
        if (radius < 0.0)
            throw std::invalid_argument("radius must be non-negative");
        const double spread = (std::hypot(distance, radius) - distance) / speed_of_light;
        return {spread, spread < margin / bandwidth};
    }

    // Run-time knobs shared by all sweeps.
    struct SweepOptions
    {
        double azimuth_step = deg_to_rad(10.0);
        double elevation_step = deg_to_rad(10.0);
        double bandwidth = 100e6;
        double narrowband_margin = 0.1;
        unsigned threads = 0; // 0: hardware concurrency
        WarningSink warn = warn_to_stderr;
    };

    // Full description of a custom sweep; angles in radians, SI units elsewhere.
    struct SweepConfig
    {
        double radius = 0.15;
        double carrier_frequency = 300e9;
        std::vector<double> alpha_values;
        std::vector<double> distance_values;
        double azimuth_step = deg_to_rad(10.0);
        double elevation_step = deg_to_rad(10.0);
        double bandwidth = 100e6;
        double transmit_power = 1e-3;
        double noise_power = thermal_noise_power(100e6);
        double narrowband_margin = 0.1;

        LinkBudget budget() const { return {transmit_power, noise_power}; }

        SweepOptions options(unsigned threads = 0, WarningSink warn = warn_to_stderr) const
        {
            return {azimuth_step, elevation_step, bandwidth, narrowband_margin, threads, std::move(warn)};
        }
    };

    struct SweepRecord
    {
        double alpha = 0.0;
        double distance = 0.0;
        std::size_t orientation_index = 0;
        SnrTriple snr;
    };

    // Evaluates every receive-dipole orientation of the grid for one receiver position.
    // The orientation-independent channel terms are computed once and shared.
    inline std::vector<SweepRecord> orientation_sweep(const ArrayLayout &layout, double alpha, double distance,
                                                      const LinkBudget &budget, const SweepOptions &opts = {})
    {
        budget.validate();
        const NarrowbandCheck nb = narrowband_check(distance, layout.radius, opts.bandwidth, opts.narrowband_margin);
        if (!nb.valid && opts.warn)
        {
            std::ostringstream msg;
            msg << "narrowband assumption violated at d = " << distance << " m (delay spread "
                << nb.delay_spread * 1e9 << " ns)";
            opts.warn(msg.str());
        }

        const std::vector<Vec3> grid = orientation_grid(opts.azimuth_step, opts.elevation_step);
        const ChannelGeometry geo(layout, rx_position(distance, alpha), opts.threads);

        std::vector<SweepRecord> records(grid.size());
        parallel_for(grid.size(), opts.threads,
                     [&](std::size_t i)
                     {
                         records[i] = {alpha, distance, i, evaluate_snr(geo, grid[i], budget)};
                     });
        return records;
    }

    enum class Baseline
    {
        switched,
        dual
    };

    // SNR gain of DPC over the baseline, in dB. A record where both SNRs vanish counts as 0 dB.
    inline double improvement_db(const SnrTriple &snr, Baseline baseline)
    {
        const double base = baseline == Baseline::switched ? snr.switched : snr.dual;
        if (snr.dpc == 0.0 && base == 0.0)
            return 0.0;
        return 10.0 * std::log10(snr.dpc / base);
    }

    inline std::vector<double> improvement_samples(const std::vector<SweepRecord> &records, Baseline baseline)
    {
        std::vector<double> out;
        out.reserve(records.size());
        for (const auto &r : records)
            out.push_back(improvement_db(r.snr, baseline));
        return out;
    }

    inline DistributionStats improvement_stats(const std::vector<SweepRecord> &records, Baseline baseline)
    {
        if (records.empty())
            throw std::invalid_argument("improvement statistics need at least one record");
        return box_stats(improvement_samples(records, baseline));
    }

    struct DistancePoint
    {
        double distance = 0.0;
        std::vector<SweepRecord> records;
        DistributionStats vs_switched;
        DistributionStats vs_dual;
    };

    struct DistanceSweep
    {
        std::vector<DistancePoint> points;
        std::vector<double> median_vs_switched;
        std::vector<double> median_vs_dual;
    };

    inline DistanceSweep distance_sweep(const ArrayLayout &layout, double alpha, const std::vector<double> &distances,
                                        const LinkBudget &budget, const SweepOptions &opts = {})
    {
        if (distances.empty())
            throw std::invalid_argument("distance sweep needs at least one distance");
        for (std::size_t i = 1; i < distances.size(); ++i)
            if (!(distances[i] > distances[i - 1]))
                throw std::invalid_argument("distances must be strictly ascending");

        DistanceSweep out;
        for (const double d : distances)
        {
            DistancePoint p;
            p.distance = d;
            p.records = orientation_sweep(layout, alpha, d, budget, opts);
            p.vs_switched = improvement_stats(p.records, Baseline::switched);
            p.vs_dual = improvement_stats(p.records, Baseline::dual);
            out.median_vs_switched.push_back(p.vs_switched.median);
            out.median_vs_dual.push_back(p.vs_dual.median);
            out.points.push_back(std::move(p));
        }
        return out;
    }

    struct ErgodicRates
    {
        double dpc = 0.0; // bit/s
        double dual = 0.0;
        double switched = 0.0;
    };

    // Mean of B log2(1 + SNR) over the records, per architecture.
    inline ErgodicRates ergodic_rate(const std::vector<SweepRecord> &records, double bandwidth)
    {
        if (records.empty())
            throw std::invalid_argument("ergodic rate needs at least one record");
        check_positive(bandwidth, "bandwidth");
        ErgodicRates sum;
        for (const auto &r : records)
        {
            sum.dpc += std::log2(1.0 + r.snr.dpc);
            sum.dual += std::log2(1.0 + r.snr.dual);
            sum.switched += std::log2(1.0 + r.snr.switched);
        }
        const double scale = bandwidth / static_cast<double>(records.size());
        return {sum.dpc * scale, sum.dual * scale, sum.switched * scale};
    }

    // Polarization angle of every DPC antenna for one receiver pose.
    inline std::vector<PolarizationAngle> polarization_map(const ArrayLayout &layout, const RxPose &pose,
                                                           unsigned threads = 0)
    {
        return polarization_angle_map(dpc_beamformer(assemble_channel(layout, pose, threads)));
    }
}
