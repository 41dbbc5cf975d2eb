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
#include "nfpol/vec3.hpp"

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace nfpol
{
    inline constexpr double speed_of_light = 299792458.0; // m/s, exact

    inline double wavelength_from_frequency(double frequency_hz)
    {
        check_positive(frequency_hz, "carrier frequency");
        return speed_of_light / frequency_hz;
    }

    inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
    inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

    // Transmit array: element centers on the z = 0 plane. The index of an element in
    // `positions` is the antenna index used by every channel and beamformer vector.
    struct ArrayLayout
    {
        std::vector<Vec3> positions;
        double wavelength = 0.0;
        double dipole_length = 0.0;
        double radius = 0.0;

        std::size_t size() const { return positions.size(); }
    };

    // Receiver center at distance d along a ray in the xz plane making angle alpha with +z,
    // carrying a single dipole along v_hat.
    struct RxPose
    {
        double distance = 0.0;
        double alpha = 0.0;
        Vec3 v_hat = unit_z;
    };

    inline Vec3 rx_position(double distance, double alpha)
    {
        check_positive(distance, "receiver distance");
        return {distance * std::sin(alpha), 0.0, distance * std::cos(alpha)};
    }

    inline Vec3 rx_position(const RxPose &pose) { return rx_position(pose.distance, pose.alpha); }

    // Square lattice of pitch wavelength/2 through the origin, clipped to the disc
    // ||r|| <= radius (boundary points kept). Elements are ordered by y, then x, ascending.
    inline ArrayLayout build_circular_array(double radius, double wavelength)
    {
        check_positive(radius, "array radius");
        check_positive(wavelength, "wavelength");

        const double pitch = wavelength / 2.0;
        const double rho = radius / pitch;
        const double rho_sq = rho * rho * (1.0 + 1e-12);
        const auto n = static_cast<long>(std::floor(rho)) + 1;

        ArrayLayout layout;
        layout.wavelength = wavelength;
        layout.dipole_length = wavelength / 2.0;
        layout.radius = radius;
        for (long j = -n; j <= n; ++j)
            for (long i = -n; i <= n; ++i)
                if (static_cast<double>(i * i + j * j) <= rho_sq)
                    layout.positions.push_back({static_cast<double>(i) * pitch, static_cast<double>(j) * pitch, 0.0});
        return layout;
    }

    // Receive-dipole directions on a uniform (elevation, azimuth) grid:
    // el in [0, pi) and az in [0, 2 pi), elevation-major. The 10 degree default yields 18 x 36 = 648 entries.
    inline std::vector<Vec3> orientation_grid(double azimuth_step = deg_to_rad(10.0),
                                              double elevation_step = deg_to_rad(10.0))
    {
        check_positive(azimuth_step, "azimuth step");
        check_positive(elevation_step, "elevation step");

        auto count_steps = [](double range, double step, const char *what)
        {
            const double steps = range / step;
            const double rounded = std::round(steps);
            if (rounded < 1.0 || std::abs(steps - rounded) > 1e-9 * steps)
                throw std::invalid_argument(std::string(what) + " step must divide its range evenly");
            return static_cast<std::size_t>(rounded);
        };
        const std::size_t n_az = count_steps(2.0 * std::numbers::pi, azimuth_step, "azimuth");
        const std::size_t n_el = count_steps(std::numbers::pi, elevation_step, "elevation");

        std::vector<Vec3> grid;
        grid.reserve(n_az * n_el);
        for (std::size_t e = 0; e < n_el; ++e)
        {
            const double el = static_cast<double>(e) * elevation_step;
            for (std::size_t a = 0; a < n_az; ++a)
            {
                const double az = static_cast<double>(a) * azimuth_step;
                grid.push_back({std::sin(el) * std::cos(az), std::sin(el) * std::sin(az), std::cos(el)});
            }
        }
        return grid;
    }
}
