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

#include "nfpol/channel.hpp"
#include "nfpol/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace nfpol
{
    inline constexpr double boltzmann_constant = 1.380649e-23; // J/K
    inline constexpr double reference_temperature = 290.0;     // K

    // Thermal noise power k_B T B in watts.
    inline double thermal_noise_power(double bandwidth_hz, double temperature_k = reference_temperature)
    {
        check_positive(bandwidth_hz, "bandwidth");
        check_positive(temperature_k, "noise temperature");
        return boltzmann_constant * temperature_k * bandwidth_hz;
    }

    struct LinkBudget
    {
        double transmit_power = 1e-3; // W
        double noise_power = 0.0;     // W

        void validate() const
        {
            check_positive(transmit_power, "transmit power");
            check_positive(noise_power, "noise power");
        }
        double snr_scale() const { return transmit_power / noise_power; }
    };

    // Linear-scale received SNRs of the three array architectures.
    struct SnrTriple
    {
        double dpc = 0.0;
        double dual = 0.0;
        double switched = 0.0;

        friend bool operator==(const SnrTriple &, const SnrTriple &) = default;
    };

    // Per-antenna weights for the x- and y-oriented dipoles.
    struct Beamformer
    {
        std::vector<Complex> f_x;
        std::vector<Complex> f_y;

        std::size_t size() const { return f_x.size(); }
    };

    // Argument of z, with the zero phasor assigned phase 0.
    inline double phase_of(const Complex &z)
    {
        if (z.real() == 0.0 && z.imag() == 0.0)
            return 0.0;
        return std::arg(z);
    }

    namespace detail
    {
        inline void check_channel(const PolarizedChannel &ch)
        {
            if (ch.h_x.size() != ch.h_y.size())
                throw std::invalid_argument("h_x and h_y must have the same length");
            if (ch.h_x.empty())
                throw std::invalid_argument("channel has no antennas");
        }
    }

    // Optimal weights under |f_x,k|^2 + |f_y,k|^2 = 1/N: each antenna gets the conjugate
    // phase of its channel and splits its power in proportion to (|h_x,k|, |h_y,k|).
    // Antennas with no channel at all get the whole budget on the x-dipole.
    inline Beamformer dpc_beamformer(const PolarizedChannel &ch)
    {
        detail::check_channel(ch);
        const std::size_t n = ch.size();
        const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));

        Beamformer bf;
        bf.f_x.resize(n);
        bf.f_y.resize(n);
        for (std::size_t k = 0; k < n; ++k)
        {
            const double ax = std::abs(ch.h_x[k]);
            const double ay = std::abs(ch.h_y[k]);
            const double total = std::hypot(ax, ay);
            if (total == 0.0)
            {
                bf.f_x[k] = inv_sqrt_n;
                bf.f_y[k] = 0.0;
                continue;
            }
            bf.f_x[k] = std::polar(inv_sqrt_n * ax / total, -phase_of(ch.h_x[k]));
            bf.f_y[k] = std::polar(inv_sqrt_n * ay / total, -phase_of(ch.h_y[k]));
        }
        return bf;
    }

    // Phase-only conjugate weights exp(-j angle(h)) / sqrt(N) used by the switched- and
    // dual-polarization arrays.
    inline Beamformer benchmark_weights(const PolarizedChannel &ch)
    {
        detail::check_channel(ch);
        const std::size_t n = ch.size();
        const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));

        Beamformer bf;
        bf.f_x.resize(n);
        bf.f_y.resize(n);
        for (std::size_t k = 0; k < n; ++k)
        {
            bf.f_x[k] = std::polar(inv_sqrt_n, -phase_of(ch.h_x[k]));
            bf.f_y[k] = std::polar(inv_sqrt_n, -phase_of(ch.h_y[k]));
        }
        return bf;
    }

    // h^T f, no conjugation.
    inline Complex transpose_product(std::span<const Complex> h, std::span<const Complex> f)
    {
        if (h.size() != f.size())
            throw std::invalid_argument("channel and weight vectors differ in length");
        Complex acc{0.0, 0.0};
        for (std::size_t k = 0; k < h.size(); ++k)
            acc += h[k] * f[k];
        return acc;
    }

    // |h_x^T f_x + h_y^T f_y|
    inline double beamforming_gain(const PolarizedChannel &ch, const Beamformer &bf)
    {
        return std::abs(transpose_product(ch.h_x, bf.f_x) + transpose_product(ch.h_y, bf.f_y));
    }

    // Evaluates all three architectures on a materialized channel by forming the weights
    // and taking the inner products explicitly.
    inline SnrTriple evaluate_snr(const PolarizedChannel &ch, const LinkBudget &budget)
    {
        budget.validate();
        const Beamformer opt = dpc_beamformer(ch);
        const Beamformer bench = benchmark_weights(ch);
        const double gamma_x = std::abs(transpose_product(ch.h_x, bench.f_x));
        const double gamma_y = std::abs(transpose_product(ch.h_y, bench.f_y));
        const double dpc_gain = beamforming_gain(ch, opt);

        const double scale = budget.snr_scale();
        return {scale * dpc_gain * dpc_gain,
                scale * (gamma_x * gamma_x + gamma_y * gamma_y),
                scale * std::max(gamma_x * gamma_x, gamma_y * gamma_y)};
    }

    // Same quantities as evaluate_snr() computed from channel magnitudes only, straight off a
    // precomputed geometry. With conjugate phases every term of each inner product is real
    // and non-negative, so
    //   gamma_x = sum |h_x,k| / sqrt(N),  dpc gain = sum sqrt(|h_x,k|^2 + |h_y,k|^2) / sqrt(N).
    // The sum runs in element order, so the result is reproducible bit for bit.
    inline SnrTriple evaluate_snr(const ChannelGeometry &geo, const Vec3 &v_hat, const LinkBudget &budget)
    {
        const std::size_t n = geo.size();
        if (n == 0)
            throw std::invalid_argument("channel has no antennas");
        const auto p_hat = geo.p_hat();
        const auto h_up = geo.unpolarized_magnitude();
        const auto fx = geo.tx_field_x();
        const auto fy = geo.tx_field_y();
        const double ratio = geo.length_ratio();

        double sum_x = 0.0, sum_y = 0.0, sum_dpc = 0.0;
        for (std::size_t k = 0; k < n; ++k)
        {
            const double amp = h_up[k] * std::abs(dipole_pattern_cos(-dot(v_hat, p_hat[k]), ratio));
            const double bx = dot(v_hat, fx[k]);
            const double by = dot(v_hat, fy[k]);
            sum_x += amp * std::abs(bx);
            sum_y += amp * std::abs(by);
            sum_dpc += amp * std::sqrt(bx * bx + by * by);
        }

        const double scale = budget.snr_scale() / static_cast<double>(n);
        const double gx2 = sum_x * sum_x;
        const double gy2 = sum_y * sum_y;
        return {scale * sum_dpc * sum_dpc, scale * (gx2 + gy2), scale * std::max(gx2, gy2)};
    }

    struct PolarizationAngle
    {
        std::optional<double> angle; // radians in (-pi/2, pi/2]; empty when both weights vanish
        bool linear = true;          // false if f_y/f_x has a non-negligible imaginary part
    };

    // Orientation of the linear polarization radiated by each DPC antenna,
    // atan(f_y,k / f_x,k) folded onto (-pi/2, pi/2].
    inline std::vector<PolarizationAngle> polarization_angle_map(const Beamformer &bf)
    {
        if (bf.f_x.size() != bf.f_y.size())
            throw std::invalid_argument("f_x and f_y must have the same length");

        std::vector<PolarizationAngle> out(bf.size());
        for (std::size_t k = 0; k < bf.size(); ++k)
        {
            const Complex fx = bf.f_x[k];
            const Complex fy = bf.f_y[k];
            const double mx = std::abs(fx);
            const double my = std::abs(fy);
            if (mx == 0.0 && my == 0.0)
            {
                out[k] = {std::nullopt, true};
                continue;
            }

            // Rotate both phasors by the phase of the stronger one; for a linearly polarized
            // pair both become real up to rounding.
            const Complex ref = std::polar(1.0, -phase_of(mx >= my ? fx : fy));
            const Complex a = fx * ref;
            const Complex b = fy * ref;
            const bool linear = std::abs((fy * std::conj(fx)).imag()) <= 1e-6 * mx * my;

            double angle = std::atan2(b.real(), a.real());
            if (angle > std::numbers::pi / 2.0)
                angle -= std::numbers::pi;
            else if (angle <= -std::numbers::pi / 2.0)
                angle += std::numbers::pi;
            out[k] = {angle, linear};
        }
        return out;
    }
}
