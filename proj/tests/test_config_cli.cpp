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

#include <catch_amalgamated.hpp>

#include "nfpol/cli.hpp"
#include "nfpol/config.hpp"

#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace nfpol;
using Catch::Approx;
namespace fs = std::filesystem;

namespace
{
    const fs::path tmp_root = NFPOL_TEST_TMP;

    RunConfig parse(const std::string &text)
    {
        std::istringstream in(text);
        return parse_config(in);
    }

    fs::path write_config(const std::string &name, const std::string &text)
    {
        fs::create_directories(tmp_root);
        const fs::path p = tmp_root / name;
        std::ofstream(p) << text;
        return p;
    }

    fs::path fresh_dir(const std::string &name)
    {
        const fs::path p = tmp_root / name;
        fs::remove_all(p);
        return p;
    }

    int run_cli(std::vector<std::string> args, std::string *err_text = nullptr)
    {
        args.insert(args.begin(), "nfpol");
        std::vector<const char *> argv;
        for (const auto &a : args)
            argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
        if (err_text)
            *err_text = err.str();
        return code;
    }

    std::string slurp(const fs::path &p)
    {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    std::vector<std::vector<std::string>> read_csv(const fs::path &p)
    {
        std::vector<std::vector<std::string>> rows;
        std::ifstream in(p);
        for (std::string line; std::getline(in, line);)
        {
            std::vector<std::string> fields;
            std::stringstream ls(line);
            for (std::string f; std::getline(ls, f, ',');)
                fields.push_back(f);
            if (!line.empty() && line.back() == ',')
                fields.emplace_back();
            rows.push_back(fields);
        }
        return rows;
    }

    // Every field of every data row must parse as a finite number (empty allowed where noted).
    void check_numeric(const fs::path &p, bool allow_empty = false)
    {
        const auto rows = read_csv(p);
        REQUIRE(rows.size() > 1);
        for (std::size_t r = 1; r < rows.size(); ++r)
        {
            REQUIRE(rows[r].size() == rows[0].size());
            for (const auto &f : rows[r])
            {
                if (f.empty() && allow_empty)
                    continue;
                std::size_t used = 0;
                const double v = std::stod(f, &used);
                CHECK(used == f.size());
                CHECK(std::isfinite(v));
            }
        }
    }

    const std::string small_config = "# desk-scale test configuration\n"
                                     "radius_m = 0.15\n"
                                     "carrier_frequency_hz = 300e9\n"
                                     "alpha_deg = 0, 30\n"
                                     "distance_m = 0.1, 0.5, 1.0\n";
}

TEST_CASE("config: defaults and parsing")
{
    const auto c = parse("radius_m = 0.15\ncarrier_frequency_hz = 3e11\n");
    CHECK(c.radius_m == 0.15);
    CHECK(c.bandwidth_hz == 100e6);
    CHECK(c.transmit_power_w == 1e-3);
    CHECK_FALSE(c.noise_power_w.has_value());
    CHECK(c.noise_power() == Approx(4.0038821e-13).epsilon(1e-12));
    CHECK(c.alpha_deg.size() == 7);
    CHECK(c.distance_m.size() == 10);

    const auto full = parse("; comment\nradius_m=0.1\ncarrier_frequency_hz = 1e11\nnoise_power_w = 1e-12\n"
                            "alpha_deg = 5 , 15,25\n azimuth_step_deg = 20\n elevation_step_deg = 30\n");
    CHECK(full.alpha_deg == std::vector<double>{5, 15, 25});
    CHECK(full.noise_power() == 1e-12);

    const auto sweep = full.sweep_config(0.5);
    CHECK(sweep.radius == 0.05);
    CHECK(sweep.alpha_values[1] == Approx(deg_to_rad(15)));
    CHECK(orientation_grid(sweep.azimuth_step, sweep.elevation_step).size() == 18 * 6);
}

TEST_CASE("config: schema violations")
{
    const std::string base = "radius_m = 0.15\ncarrier_frequency_hz = 3e11\n";
    CHECK_THROWS_AS(parse(""), config_error);
    CHECK_THROWS_AS(parse("radius_m = 0.15\n"), config_error);
    CHECK_THROWS_AS(parse(base + "colour = blue\n"), config_error);
    CHECK_THROWS_AS(parse(base + "bandwidth_hz = fast\n"), config_error);
    CHECK_THROWS_AS(parse(base + "bandwidth_hz = 1e8 Hz\n"), config_error);
    CHECK_THROWS_AS(parse(base + "transmit_power_w = -1\n"), config_error);
    CHECK_THROWS_AS(parse(base + "distance_m = 0.5, 0.2\n"), config_error);
    CHECK_THROWS_AS(parse(base + "distance_m = 0.5,\n"), config_error);
    CHECK_THROWS_AS(parse(base + "alpha_deg = 95\n"), config_error);
    CHECK_THROWS_AS(parse(base + "azimuth_step_deg = 7\n"), config_error);
    CHECK_THROWS_AS(parse(base + "radius_m = 0.2\n"), config_error);
    CHECK_THROWS_AS(parse(base + "[section]\nkey = 1\n"), config_error);
    CHECK_THROWS_AS(parse(base + "noise_power_w = inf\n"), config_error);
}

TEST_CASE("config: resolved echo round-trips")
{
    for (const std::string text : {std::string("radius_m = 0.15\ncarrier_frequency_hz = 3e11\n"), small_config,
                                   std::string("radius_m = 0.0123456789\ncarrier_frequency_hz = 2.8e10\n"
                                               "noise_power_w = 3.3e-14\nalpha_deg = 0.1, 12.7\n"
                                               "fig3_distance_m = 0.33\nfig6_alpha_deg = 45\n")})
    {
        const auto c = parse(text);
        const auto echoed = parse(to_config_text(c));
        CHECK(echoed == c.resolved());
    }
}

TEST_CASE("cli: usage and validation failures")
{
    const auto cfg = write_config("good.cfg", small_config);
    const auto empty = write_config("empty.cfg", "");

    CHECK(run_cli({"frobnicate", "--config", cfg.string(), "--out", fresh_dir("x").string()}) == cli::usage_error);
    CHECK(run_cli({}) == cli::usage_error);
    CHECK(run_cli({"check", "--out", fresh_dir("x").string()}) == cli::usage_error);
    CHECK(run_cli({"check", "--config", cfg.string(), "--out", fresh_dir("x").string(), "--scale", "-1"}) ==
          cli::usage_error);

    const auto out = fresh_dir("empty_out");
    std::string err;
    CHECK(run_cli({"fig5", "--config", empty.string(), "--out", out.string()}, &err) == cli::config_invalid);
    CHECK_FALSE(err.empty());
    CHECK_FALSE(fs::exists(out));

    CHECK(run_cli({"check", "--config", (tmp_root / "missing.cfg").string(), "--out", out.string()}) ==
          cli::config_invalid);

    const auto blocker = write_config("blocker", "not a directory");
    CHECK(run_cli({"check", "--config", cfg.string(), "--out", (blocker / "sub").string()}) == cli::output_unwritable);
}

TEST_CASE("cli: check scenario and manifest")
{
    const auto cfg = write_config("check.cfg", small_config);
    const auto out = fresh_dir("check_out");
    REQUIRE(run_cli({"check", "--config", cfg.string(), "--out", out.string()}) == cli::success);

    const auto rows = read_csv(out / "check.csv");
    REQUIRE(rows.size() == 4);
    CHECK(rows[0][0] == "distance_m");
    CHECK(std::stod(rows[1][0]) == 0.1);
    CHECK(std::stod(rows[1][3]) == Approx(0.267777129247).epsilon(1e-10));
    CHECK(rows[1][5] == "1");
    check_numeric(out / "check.csv");

    const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
    CHECK(manifest["scenario"] == "check");
    CHECK(manifest["tool_version"] == version);
    CHECK(manifest["scale"] == 1.0);
    CHECK(manifest["derived"]["n_tx"] == 283177);
    CHECK(manifest["derived"]["n_tx"].get<std::size_t>() ==
          build_circular_array(0.15, wavelength_from_frequency(300e9)).size());
    CHECK(manifest["derived"]["noise_power_w"].get<double>() == Approx(4.0038821e-13).epsilon(1e-12));
    for (const auto &f : manifest["outputs"])
        CHECK(fs::exists(out / f.get<std::string>()));

    std::istringstream echo(manifest["config_echo"].get<std::string>());
    CHECK(parse_config(echo) == parse(small_config).resolved());
}

TEST_CASE("cli: desk-scale figure scenarios")
{
    const auto cfg = write_config("figs.cfg", small_config);

    SECTION("fig5")
    {
        const auto out = fresh_dir("fig5_out");
        REQUIRE(run_cli({"fig5", "--config", cfg.string(), "--out", out.string(), "--scale", "0.1"}) == cli::success);
        const auto rows = read_csv(out / "fig5.csv");
        REQUIRE(rows.size() == 3);
        CHECK(rows[0].size() == 13);
        CHECK(rows[1][2] == "648");
        check_numeric(out / "fig5.csv");
        const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
        CHECK(manifest["scale"] == 0.1);
        CHECK(manifest["full_scale"] == false);
        CHECK(manifest["derived"]["n_tx"] == build_circular_array(0.015, wavelength_from_frequency(300e9)).size());
        CHECK(manifest["summary"].contains("fig5_pooled_median_vs_dual_db"));
    }
    SECTION("fig6 and fig7")
    {
        const auto out = fresh_dir("fig67_out");
        REQUIRE(run_cli({"fig6", "--config", cfg.string(), "--out", out.string(), "--scale", "0.1"}) == cli::success);
        REQUIRE(run_cli({"fig7", "--config", cfg.string(), "--out", out.string(), "--scale", "0.1"}) == cli::success);
        CHECK(read_csv(out / "fig6.csv").size() == 4);
        const auto rates = read_csv(out / "fig7.csv");
        REQUIRE(rates.size() == 4);
        for (std::size_t r = 1; r < rates.size(); ++r)
        {
            CHECK(std::stod(rates[r][4]) >= std::stod(rates[r][5]));
            CHECK(std::stod(rates[r][5]) >= std::stod(rates[r][6]));
        }
        check_numeric(out / "fig6.csv");
        check_numeric(out / "fig7.csv");
    }
    SECTION("fig3")
    {
        const auto out = fresh_dir("fig3_out");
        REQUIRE(run_cli({"fig3", "--config", cfg.string(), "--out", out.string(), "--scale", "0.1"}) == cli::success);
        const auto summary = read_csv(out / "fig3_summary.csv");
        REQUIRE(summary.size() == 3);
        CHECK(std::stod(summary[1][4]) > std::stod(summary[2][4]));
        check_numeric(out / "fig3_summary.csv");
        check_numeric(out / "fig3.csv", true);
    }
    SECTION("sweep is byte-identical across thread counts")
    {
        const auto a = fresh_dir("sweep_a"), b = fresh_dir("sweep_b");
        REQUIRE(run_cli({"sweep", "--config", cfg.string(), "--out", a.string(), "--scale", "0.1", "--threads", "1"}) ==
                cli::success);
        REQUIRE(run_cli({"sweep", "--config", cfg.string(), "--out", b.string(), "--scale", "0.1", "--threads", "3"}) ==
                cli::success);
        CHECK(read_csv(a / "sweep.csv").size() == 7);
        CHECK(slurp(a / "sweep.csv") == slurp(b / "sweep.csv"));
        check_numeric(a / "sweep.csv");
    }
}
