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

#include "nfpol/errors.hpp"
#include "nfpol/geometry.hpp"
#include "nfpol/parallel.hpp"
#include "nfpol/vec3.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace nfpol
{
    using Complex = std::complex<double>;

    // Free-space LoS term for a path of length ||p||: (lambda / (4 pi ||p||)) exp(-j 2 pi ||p|| / lambda).
    inline Complex unpolarized_gain(const Vec3 &p_vec, double wavelength)
    {
        check_positive(wavelength, "wavelength");
        const double dist = norm(p_vec);
        if (!(dist > 0.0))
            throw degenerate_input("transmit element and receiver are co-located");
        const double magnitude = wavelength / (4.0 * std::numbers::pi * dist);
        return std::polar(magnitude, -2.0 * std::numbers::pi * dist / wavelength);
    }

    // Normalized dipole field pattern written in terms of cos(theta). Directions with
    // sin(theta) below 1e-9 are on the dipole axis and return the axial null.
    inline double dipole_pattern_cos(double cos_theta, double dipole_length_over_lambda)
    {
        const double c = std::clamp(cos_theta, -1.0, 1.0);
        const double sin_theta = std::sqrt(std::max(0.0, 1.0 - c * c));
        if (sin_theta < 1e-9)
            return 0.0;
        const double k = std::numbers::pi * dipole_length_over_lambda;
        return (std::cos(k * c) - std::cos(k)) / sin_theta;
    }

    // [cos(pi (l/lambda) cos(theta)) - cos(pi l/lambda)] / sin(theta), theta in [0, pi].
    inline double dipole_pattern(double theta, double dipole_length_over_lambda)
    {
        const double sin_theta = std::sin(theta);
        if (std::abs(sin_theta) < 1e-9)
            return 0.0;
        const double k = std::numbers::pi * dipole_length_over_lambda;
        return (std::cos(k * std::cos(theta)) - std::cos(k)) / sin_theta;
    }

    struct FieldDirection
    {
        Vec3 direction;
        bool degenerate = false;
    };

    // Unit electric-field direction at the receiver for a dipole along u_hat radiating
    // towards p_hat: p x (u x p), normalized. When u is parallel to p the field vanishes
    // and the zero vector is returned with the degenerate flag set.
    inline FieldDirection impinging_field_dir(const Vec3 &u_hat, const Vec3 &p_hat)
    {
        const Vec3 field = cross(p_hat, cross(u_hat, p_hat));
        const double n = norm(field);
        if (n < 1e-12)
            return {Vec3{}, true};
        return {field / n, false};
    }

    // Channel between one transmit dipole along u_hat and the receive dipole along v_hat,
    // with p_vec pointing from the transmit element to the receiver center.
    inline Complex polarized_gain(const Vec3 &u_hat, const Vec3 &v_hat, const Vec3 &p_vec,
                                  double wavelength, double dipole_length)
    {
        const Complex h_up = unpolarized_gain(p_vec, wavelength);
        const Vec3 p_hat = normalize(p_vec);
        const double ratio = dipole_length / wavelength;

        const double theta_tx = std::acos(std::clamp(dot(u_hat, p_hat), -1.0, 1.0));
        const double theta_rx = std::numbers::pi - std::acos(std::clamp(dot(v_hat, p_hat), -1.0, 1.0));
        const double g_tx = dipole_pattern(theta_tx, ratio);
        const double g_rx = dipole_pattern(theta_rx, ratio);

        const FieldDirection e = impinging_field_dir(u_hat, p_hat);
        if (e.degenerate)
            return Complex{0.0, 0.0};
        const double beta = dot(v_hat, e.direction);
        return h_up * (g_tx * g_rx * beta);
    }

    // Channel vectors from the x-oriented and y-oriented transmit dipoles, indexed like the layout.
    struct PolarizedChannel
    {
        std::vector<Complex> h_x;
        std::vector<Complex> h_y;

        std::size_t size() const { return h_x.size(); }
    };

    // Orientation-independent part of the channel for a fixed array and receiver center.
    // Path lengths, free-space terms, transmit patterns and impinging fields are computed
    // once; each receive-dipole orientation then costs one pattern evaluation and two dot
    // products per element.
    class ChannelGeometry
    {
    public:
        ChannelGeometry(const ArrayLayout &layout, const Vec3 &rx_center, unsigned threads = 1)
            : length_ratio_(layout.dipole_length / layout.wavelength)
        {
            check_positive(layout.wavelength, "wavelength");
            check_positive(layout.dipole_length, "dipole length");
            const std::size_t n = layout.size();
            p_hat_.resize(n);
            h_up_.resize(n);
            h_up_abs_.resize(n);
            tx_field_x_.resize(n);
            tx_field_y_.resize(n);

            parallel_for(
                n, threads,
                [&](std::size_t k)
                {
                    const Vec3 p = rx_center - layout.positions[k];
                    h_up_[k] = unpolarized_gain(p, layout.wavelength);
                    h_up_abs_[k] = std::abs(h_up_[k]);
                    p_hat_[k] = normalize(p);
                    tx_field_x_[k] = transmit_field(unit_x, p_hat_[k]);
                    tx_field_y_[k] = transmit_field(unit_y, p_hat_[k]);
                },
                4096);
        }

        std::size_t size() const { return p_hat_.size(); }
        double length_ratio() const { return length_ratio_; }

        std::span<const Vec3> p_hat() const { return p_hat_; }
        std::span<const Complex> unpolarized() const { return h_up_; }
        std::span<const double> unpolarized_magnitude() const { return h_up_abs_; }
        // g_tx * e_hat for the x- and y-oriented dipoles; beta * g_tx = dot(v_hat, field).
        std::span<const Vec3> tx_field_x() const { return tx_field_x_; }
        std::span<const Vec3> tx_field_y() const { return tx_field_y_; }

        // Receive pattern at element k: theta_rx = pi - acos(v.p), so cos(theta_rx) = -v.p.
        double rx_pattern(std::size_t k, const Vec3 &v_hat) const
        {
            return dipole_pattern_cos(-dot(v_hat, p_hat_[k]), length_ratio_);
        }

        PolarizedChannel channel(const Vec3 &v_hat) const
        {
            PolarizedChannel ch;
            ch.h_x.resize(size());
            ch.h_y.resize(size());
            for (std::size_t k = 0; k < size(); ++k)
            {
                const double g_rx = rx_pattern(k, v_hat);
                ch.h_x[k] = h_up_[k] * (g_rx * dot(v_hat, tx_field_x_[k]));
                ch.h_y[k] = h_up_[k] * (g_rx * dot(v_hat, tx_field_y_[k]));
            }
            return ch;
        }

    private:
        Vec3 transmit_field(const Vec3 &u_hat, const Vec3 &p_hat) const
        {
            const FieldDirection e = impinging_field_dir(u_hat, p_hat);
            if (e.degenerate)
                return Vec3{};
            return dipole_pattern_cos(dot(u_hat, p_hat), length_ratio_) * e.direction;
        }

        double length_ratio_;
        std::vector<Vec3> p_hat_;
        std::vector<Complex> h_up_;
        std::vector<double> h_up_abs_;
        std::vector<Vec3> tx_field_x_;
        std::vector<Vec3> tx_field_y_;
    };

    inline PolarizedChannel assemble_channel(const ArrayLayout &layout, const RxPose &pose, unsigned threads = 1)
    {
        return ChannelGeometry(layout, rx_position(pose), threads).channel(pose.v_hat);
    }
}
