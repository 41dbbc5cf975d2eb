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
#include "nfpol/experiments.hpp"
#include "nfpol/geometry.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace nfpol
{
    // Raised for any config file that does not satisfy the documented schema.
    class config_error : public std::runtime_error
    {
    public:
        explicit config_error(const std::string &what) : std::runtime_error(what) {}
    };

    // Run configuration in file units: lengths in meters, frequencies in Hz, powers in W,
    // angles in degrees.
    //
    // File format: one `key = value` per line, `#` or `;` starts a comment, lists are
    // comma separated. Required keys: radius_m, carrier_frequency_hz. Everything else
    // has a default (see the member initializers).
    struct RunConfig
    {
        double radius_m = 0.0;
        double carrier_frequency_hz = 0.0;
        double bandwidth_hz = 100e6;
        double transmit_power_w = 1e-3;
        std::optional<double> noise_power_w; // default: thermal noise at 290 K over bandwidth_hz
        std::vector<double> alpha_deg{0, 10, 20, 30, 40, 50, 60};
        std::vector<double> distance_m{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
        double azimuth_step_deg = 10.0;
        double elevation_step_deg = 10.0;
        double narrowband_margin = 0.1;
        std::vector<double> fig3_distance_m{0.15, 1.0};
        double fig3_alpha_deg = 30.0;
        double fig5_distance_m = 0.1;
        double fig6_alpha_deg = 30.0;

        friend bool operator==(const RunConfig &, const RunConfig &) = default;

        double noise_power() const { return noise_power_w ? *noise_power_w : thermal_noise_power(bandwidth_hz); }
        double wavelength() const { return wavelength_from_frequency(carrier_frequency_hz); }

        // Copy with every defaulted quantity made explicit.
        RunConfig resolved() const
        {
            RunConfig r = *this;
            r.noise_power_w = noise_power();
            return r;
        }

        // Sweep description in radians; `scale` shrinks the array radius for quick runs.
        SweepConfig sweep_config(double scale = 1.0) const
        {
            SweepConfig s;
            s.radius = radius_m * scale;
            s.carrier_frequency = carrier_frequency_hz;
            for (double a : alpha_deg)
                s.alpha_values.push_back(deg_to_rad(a));
            s.distance_values = distance_m;
            s.azimuth_step = deg_to_rad(azimuth_step_deg);
            s.elevation_step = deg_to_rad(elevation_step_deg);
            s.bandwidth = bandwidth_hz;
            s.transmit_power = transmit_power_w;
            s.noise_power = noise_power();
            s.narrowband_margin = narrowband_margin;
            return s;
        }
    };

    namespace detail
    {
        inline double parse_number(const std::string &key, std::string_view text)
        {
            while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
                text.remove_prefix(1);
            while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
                text.remove_suffix(1);
            double value = 0.0;
            const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
            if (text.empty() || ec != std::errc{} || end != text.data() + text.size() || !std::isfinite(value))
                throw config_error("key '" + key + "': '" + std::string(text) + "' is not a finite number");
            return value;
        }

        inline std::vector<double> parse_list(const std::string &key, const std::string &text)
        {
            std::vector<double> out;
            std::string_view rest = text;
            for (;;)
            {
                const auto comma = rest.find(',');
                out.push_back(parse_number(key, rest.substr(0, comma)));
                if (comma == std::string_view::npos)
                    break;
                rest.remove_prefix(comma + 1);
            }
            return out;
        }

        inline void require_positive(const std::string &key, double v)
        {
            if (!(v > 0.0))
                throw config_error("key '" + key + "' must be strictly positive");
        }

        inline std::string format_number(double v)
        {
            std::ostringstream os;
            os << std::setprecision(17) << v;
            return os.str();
        }

        inline std::string format_list(const std::vector<double> &values)
        {
            std::string out;
            for (std::size_t i = 0; i < values.size(); ++i)
            {
                if (i)
                    out += ", ";
                out += format_number(values[i]);
            }
            return out;
        }
    }

    inline void validate(const RunConfig &c)
    {
        using detail::require_positive;
        require_positive("radius_m", c.radius_m);
        require_positive("carrier_frequency_hz", c.carrier_frequency_hz);
        require_positive("bandwidth_hz", c.bandwidth_hz);
        require_positive("transmit_power_w", c.transmit_power_w);
        if (c.noise_power_w)
            require_positive("noise_power_w", *c.noise_power_w);
        require_positive("narrowband_margin", c.narrowband_margin);
        require_positive("fig5_distance_m", c.fig5_distance_m);

        auto check_alpha = [](const std::string &key, double a)
        {
            if (!(a > -90.0 && a < 90.0))
                throw config_error("key '" + key + "' must lie in (-90, 90) degrees");
        };
        if (c.alpha_deg.empty())
            throw config_error("key 'alpha_deg' must list at least one angle");
        for (double a : c.alpha_deg)
            check_alpha("alpha_deg", a);
        check_alpha("fig3_alpha_deg", c.fig3_alpha_deg);
        check_alpha("fig6_alpha_deg", c.fig6_alpha_deg);

        auto check_distances = [](const std::string &key, const std::vector<double> &list)
        {
            if (list.empty())
                throw config_error("key '" + key + "' must list at least one distance");
            for (std::size_t i = 0; i < list.size(); ++i)
            {
                require_positive(key, list[i]);
                if (i > 0 && !(list[i] > list[i - 1]))
                    throw config_error("key '" + key + "' must be strictly ascending");
            }
        };
        check_distances("distance_m", c.distance_m);
        check_distances("fig3_distance_m", c.fig3_distance_m);

        require_positive("azimuth_step_deg", c.azimuth_step_deg);
        require_positive("elevation_step_deg", c.elevation_step_deg);
        try
        {
            (void)orientation_grid(deg_to_rad(c.azimuth_step_deg), deg_to_rad(c.elevation_step_deg));
        }
        catch (const std::invalid_argument &e)
        {
            throw config_error(std::string("orientation grid: ") + e.what());
        }
    }

    inline RunConfig parse_config(std::istream &in)
    {
        namespace pt = boost::property_tree;
        pt::ptree tree;
        try
        {
            pt::read_ini(in, tree);
        }
        catch (const pt::ini_parser_error &e)
        {
            throw config_error(std::string("malformed config: ") + e.what());
        }

        RunConfig c;
        std::set<std::string> seen;
        for (const auto &[key, node] : tree)
        {
            if (!node.empty())
                throw config_error("sections are not supported ('[" + key + "]')");
            const std::string &value = node.data();
            seen.insert(key);

            if (key == "radius_m")
                c.radius_m = detail::parse_number(key, value);
            else if (key == "carrier_frequency_hz")
                c.carrier_frequency_hz = detail::parse_number(key, value);
            else if (key == "bandwidth_hz")
                c.bandwidth_hz = detail::parse_number(key, value);
            else if (key == "transmit_power_w")
                c.transmit_power_w = detail::parse_number(key, value);
            else if (key == "noise_power_w")
                c.noise_power_w = detail::parse_number(key, value);
            else if (key == "alpha_deg")
                c.alpha_deg = detail::parse_list(key, value);
            else if (key == "distance_m")
                c.distance_m = detail::parse_list(key, value);
            else if (key == "azimuth_step_deg")
                c.azimuth_step_deg = detail::parse_number(key, value);
            else if (key == "elevation_step_deg")
                c.elevation_step_deg = detail::parse_number(key, value);
            else if (key == "narrowband_margin")
                c.narrowband_margin = detail::parse_number(key, value);
            else if (key == "fig3_distance_m")
                c.fig3_distance_m = detail::parse_list(key, value);
            else if (key == "fig3_alpha_deg")
                c.fig3_alpha_deg = detail::parse_number(key, value);
            else if (key == "fig5_distance_m")
                c.fig5_distance_m = detail::parse_number(key, value);
            else if (key == "fig6_alpha_deg")
                c.fig6_alpha_deg = detail::parse_number(key, value);
            else
                throw config_error("unknown key '" + key + "'");
        }

        for (const auto *key : {"radius_m", "carrier_frequency_hz"})
            if (!seen.contains(key))
                throw config_error(std::string("missing required key '") + key + "'");

        validate(c);
        return c;
    }

    inline RunConfig load_config(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw config_error("cannot open config file '" + path + "'");
        return parse_config(in);
    }

    // Fully resolved configuration in the file format; parses back to c.resolved().
    inline std::string to_config_text(const RunConfig &c)
    {
        using detail::format_list;
        using detail::format_number;
        std::ostringstream os;
        os << "radius_m = " << format_number(c.radius_m) << '\n'
           << "carrier_frequency_hz = " << format_number(c.carrier_frequency_hz) << '\n'
           << "bandwidth_hz = " << format_number(c.bandwidth_hz) << '\n'
           << "transmit_power_w = " << format_number(c.transmit_power_w) << '\n'
           << "noise_power_w = " << format_number(c.noise_power()) << '\n'
           << "alpha_deg = " << format_list(c.alpha_deg) << '\n'
           << "distance_m = " << format_list(c.distance_m) << '\n'
           << "azimuth_step_deg = " << format_number(c.azimuth_step_deg) << '\n'
           << "elevation_step_deg = " << format_number(c.elevation_step_deg) << '\n'
           << "narrowband_margin = " << format_number(c.narrowband_margin) << '\n'
           << "fig3_distance_m = " << format_list(c.fig3_distance_m) << '\n'
           << "fig3_alpha_deg = " << format_number(c.fig3_alpha_deg) << '\n'
           << "fig5_distance_m = " << format_number(c.fig5_distance_m) << '\n'
           << "fig6_alpha_deg = " << format_number(c.fig6_alpha_deg) << '\n';
        return os.str();
    }
}
