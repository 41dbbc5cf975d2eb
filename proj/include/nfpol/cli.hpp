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
#include "nfpol/config.hpp"
#include "nfpol/experiments.hpp"
#include "nfpol/geometry.hpp"
#include "nfpol/version.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace nfpol::cli
{
    enum exit_code : int
    {
        success = 0,
        runtime_failure = 1,
        usage_error = 2,        // unknown subcommand or bad command-line flags
        config_invalid = 3,     // missing, unreadable or schema-violating config file
        output_unwritable = 4,  // output directory cannot be created or written
    };

    inline const std::vector<std::string> &scenario_names()
    {
        static const std::vector<std::string> names{"fig3", "fig5", "fig6", "fig7", "sweep", "check"};
        return names;
    }

    // Small CSV writer; every number goes through one fixed format so reruns are byte-identical.
    class CsvWriter
    {
    public:
        explicit CsvWriter(const std::filesystem::path &path) : out_(path)
        {
            if (!out_)
                throw std::ios_base::failure("cannot open " + path.string());
            out_ << std::setprecision(12);
        }

        template <typename... Fields>
        void row(const Fields &...fields)
        {
            bool first = true;
            ((out_ << (first ? "" : ","), first = false, put(fields)), ...);
            out_ << '\n';
        }

        void finish()
        {
            out_.flush();
            if (!out_)
                throw std::ios_base::failure("write failed");
        }

    private:
        void put(const std::string &s) { out_ << s; }
        void put(const char *s) { out_ << s; }
        void put(double v)
        {
            if (!std::isfinite(v))
                throw std::runtime_error("refusing to write a non-finite value to CSV");
            out_ << (v == 0.0 ? 0.0 : v); // no "-0"
        }
        void put(std::size_t v) { out_ << v; }
        void put(bool v) { out_ << (v ? 1 : 0); }

        std::ofstream out_;
    };

    struct RunContext
    {
        RunConfig config;
        double scale = 1.0;
        unsigned threads = 0;
        std::filesystem::path out_dir;
        ArrayLayout layout;
        SweepConfig sweep;
        std::vector<std::string> outputs;
        nlohmann::json summary = nlohmann::json::object();

        SweepOptions options() const { return sweep.options(threads); }
        std::filesystem::path output(const std::string &name)
        {
            outputs.push_back(name);
            return out_dir / name;
        }
    };

    namespace detail
    {
        inline const char *stat_columns_suffix[] = {"median_db", "lower_quartile_db", "upper_quartile_db",
                                                    "lower_whisker_db", "upper_whisker_db"};

        inline std::string stats_header(const std::string &prefix)
        {
            std::string h;
            for (const char *s : stat_columns_suffix)
                h += (h.empty() ? "" : ",") + prefix + s;
            return h;
        }

        inline std::string stats_fields(const DistributionStats &s)
        {
            std::ostringstream os;
            os << std::setprecision(12) << s.median << ',' << s.lower_quartile << ',' << s.upper_quartile << ','
               << s.lower_whisker << ',' << s.upper_whisker;
            return os.str();
        }

        inline void write_stats_header(CsvWriter &csv, const char *leading)
        {
            csv.row(std::string(leading), stats_header("sw_"), stats_header("dp_"));
        }

        inline void check_finite(const DistributionStats &s)
        {
            for (double v : {s.median, s.lower_quartile, s.upper_quartile, s.lower_whisker, s.upper_whisker})
                if (!std::isfinite(v))
                    throw std::runtime_error("non-finite improvement statistic");
        }

        inline void run_fig3(RunContext &ctx)
        {
            CsvWriter map(ctx.output("fig3.csv"));
            map.row("distance_m,alpha_deg,element_index,x_m,y_m,polarization_angle_deg,linear_polarized");
            CsvWriter summary(ctx.output("fig3_summary.csv"));
            summary.row("distance_m,alpha_deg,element_count,defined_count,angle_std_deg,angle_min_deg,angle_max_deg");

            const double alpha = deg_to_rad(ctx.config.fig3_alpha_deg);
            for (const double d : ctx.config.fig3_distance_m)
            {
                const auto angles = polarization_map(ctx.layout, RxPose{d, alpha, unit_z}, ctx.threads);
                double sum = 0.0, sum_sq = 0.0, lo = 0.0, hi = 0.0;
                std::size_t defined = 0;
                for (std::size_t k = 0; k < angles.size(); ++k)
                {
                    const Vec3 &r = ctx.layout.positions[k];
                    if (!angles[k].angle)
                    {
                        map.row(d, ctx.config.fig3_alpha_deg, k, r.x, r.y, "", angles[k].linear);
                        continue;
                    }
                    const double deg = rad_to_deg(*angles[k].angle);
                    map.row(d, ctx.config.fig3_alpha_deg, k, r.x, r.y, deg, angles[k].linear);
                    lo = defined ? std::min(lo, deg) : deg;
                    hi = defined ? std::max(hi, deg) : deg;
                    sum += deg;
                    sum_sq += deg * deg;
                    ++defined;
                }
                const double mean = defined ? sum / static_cast<double>(defined) : 0.0;
                const double var = defined ? std::max(0.0, sum_sq / static_cast<double>(defined) - mean * mean) : 0.0;
                summary.row(d, ctx.config.fig3_alpha_deg, angles.size(), defined, std::sqrt(var), lo, hi);
            }
            map.finish();
            summary.finish();
        }

        inline void run_fig5(RunContext &ctx)
        {
            CsvWriter csv(ctx.output("fig5.csv"));
            write_stats_header(csv, "alpha_deg,distance_m,sample_count");
            std::vector<SweepRecord> pooled;
            for (std::size_t i = 0; i < ctx.sweep.alpha_values.size(); ++i)
            {
                const auto records = orientation_sweep(ctx.layout, ctx.sweep.alpha_values[i], ctx.config.fig5_distance_m,
                                                       ctx.sweep.budget(), ctx.options());
                const auto sw = improvement_stats(records, Baseline::switched);
                const auto dp = improvement_stats(records, Baseline::dual);
                check_finite(sw);
                check_finite(dp);
                csv.row(ctx.config.alpha_deg[i], ctx.config.fig5_distance_m, records.size(), stats_fields(sw),
                        stats_fields(dp));
                pooled.insert(pooled.end(), records.begin(), records.end());
            }
            csv.finish();
            ctx.summary["fig5_pooled_median_vs_switched_db"] = improvement_stats(pooled, Baseline::switched).median;
            ctx.summary["fig5_pooled_median_vs_dual_db"] = improvement_stats(pooled, Baseline::dual).median;
        }

        inline void run_fig6(RunContext &ctx)
        {
            CsvWriter csv(ctx.output("fig6.csv"));
            write_stats_header(csv, "distance_m,alpha_deg,sample_count");
            const auto sweep = distance_sweep(ctx.layout, deg_to_rad(ctx.config.fig6_alpha_deg), ctx.config.distance_m,
                                              ctx.sweep.budget(), ctx.options());
            for (const auto &p : sweep.points)
            {
                check_finite(p.vs_switched);
                check_finite(p.vs_dual);
                csv.row(p.distance, ctx.config.fig6_alpha_deg, p.records.size(), stats_fields(p.vs_switched),
                        stats_fields(p.vs_dual));
            }
            csv.finish();
        }

        inline void run_fig7(RunContext &ctx)
        {
            CsvWriter csv(ctx.output("fig7.csv"));
            csv.row("distance_m,alpha_deg,sample_count,transmit_power_w,rate_dpc_bps,rate_dual_bps,rate_switched_bps");
            const double alpha = deg_to_rad(ctx.config.fig6_alpha_deg);
            for (const double d : ctx.config.distance_m)
            {
                const auto records = orientation_sweep(ctx.layout, alpha, d, ctx.sweep.budget(), ctx.options());
                const auto rates = ergodic_rate(records, ctx.sweep.bandwidth);
                csv.row(d, ctx.config.fig6_alpha_deg, records.size(), ctx.sweep.transmit_power, rates.dpc, rates.dual,
                        rates.switched);
            }
            csv.finish();
        }

        inline void run_sweep(RunContext &ctx)
        {
            CsvWriter csv(ctx.output("sweep.csv"));
            csv.row("alpha_deg,distance_m,sample_count", stats_header("sw_"), stats_header("dp_"),
                    "rate_dpc_bps,rate_dual_bps,rate_switched_bps,delay_spread_ns,narrowband_valid");
            for (std::size_t i = 0; i < ctx.sweep.alpha_values.size(); ++i)
                for (const double d : ctx.config.distance_m)
                {
                    const auto records =
                        orientation_sweep(ctx.layout, ctx.sweep.alpha_values[i], d, ctx.sweep.budget(), ctx.options());
                    const auto sw = improvement_stats(records, Baseline::switched);
                    const auto dp = improvement_stats(records, Baseline::dual);
                    check_finite(sw);
                    check_finite(dp);
                    const auto rates = ergodic_rate(records, ctx.sweep.bandwidth);
                    const auto nb = narrowband_check(d, ctx.sweep.radius, ctx.sweep.bandwidth, ctx.sweep.narrowband_margin);
                    csv.row(ctx.config.alpha_deg[i], d, records.size(), stats_fields(sw), stats_fields(dp), rates.dpc,
                            rates.dual, rates.switched, nb.delay_spread * 1e9, nb.valid);
                }
            csv.finish();
        }

        inline void run_check(RunContext &ctx)
        {
            CsvWriter csv(ctx.output("check.csv"));
            csv.row("distance_m,radius_m,bandwidth_hz,delay_spread_ns,threshold_ns,valid");
            for (const double d : ctx.config.distance_m)
            {
                const auto nb = narrowband_check(d, ctx.sweep.radius, ctx.sweep.bandwidth, ctx.sweep.narrowband_margin);
                csv.row(d, ctx.sweep.radius, ctx.sweep.bandwidth, nb.delay_spread * 1e9,
                        ctx.sweep.narrowband_margin / ctx.sweep.bandwidth * 1e9, nb.valid);
            }
            csv.finish();
        }

        inline std::string utc_timestamp()
        {
            const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
            std::tm tm{};
            gmtime_r(&now, &tm);
            std::ostringstream os;
            os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
            return os.str();
        }

        inline void write_manifest(const RunContext &ctx, const std::string &scenario)
        {
            nlohmann::json m;
            m["tool"] = "nfpol";
            m["tool_version"] = version;
            m["timestamp"] = utc_timestamp();
            m["scenario"] = scenario;
            m["scale"] = ctx.scale;
            m["full_scale"] = ctx.scale == 1.0;
            m["threads"] = resolve_thread_count(ctx.threads);
            m["config_echo"] = to_config_text(ctx.config);
            m["derived"] = {
                {"n_tx", ctx.layout.size()},
                {"wavelength_m", ctx.layout.wavelength},
                {"dipole_length_m", ctx.layout.dipole_length},
                {"array_radius_m", ctx.layout.radius},
                {"noise_power_w", ctx.sweep.noise_power},
                {"orientation_count",
                 orientation_grid(ctx.sweep.azimuth_step, ctx.sweep.elevation_step).size()},
            };
            m["statistics"] = {
                {"quartiles", "linear interpolation at q (n - 1)"},
                {"whiskers", "most extreme samples within 1.5 IQR of the box"},
            };
            m["outputs"] = ctx.outputs;
            if (!ctx.summary.empty())
                m["summary"] = ctx.summary;

            std::ofstream out(ctx.out_dir / "manifest.json");
            out << m.dump(2) << '\n';
            if (!out)
                throw std::ios_base::failure("cannot write manifest.json");
        }
    }

    // Runs one scenario end to end and returns the process exit status.
    inline int run_scenario(const std::string &scenario, const std::string &config_path,
                            const std::filesystem::path &out_dir, double scale, unsigned threads, std::ostream &err)
    {
        RunContext ctx;
        try
        {
            ctx.config = load_config(config_path);
        }
        catch (const config_error &e)
        {
            err << "config error: " << e.what() << '\n';
            return config_invalid;
        }

        ctx.scale = scale;
        ctx.threads = threads;
        ctx.out_dir = out_dir;
        ctx.sweep = ctx.config.sweep_config(scale);
        ctx.layout = build_circular_array(ctx.sweep.radius, ctx.config.wavelength());

        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec || !std::filesystem::is_directory(out_dir))
        {
            err << "cannot create output directory '" << out_dir.string() << "'\n";
            return output_unwritable;
        }
        {
            const auto probe = out_dir / ".nfpol_write_probe";
            std::ofstream test(probe);
            if (!test)
            {
                err << "output directory '" << out_dir.string() << "' is not writable\n";
                return output_unwritable;
            }
            test.close();
            std::filesystem::remove(probe, ec);
        }

        try
        {
            if (scenario == "fig3")
                detail::run_fig3(ctx);
            else if (scenario == "fig5")
                detail::run_fig5(ctx);
            else if (scenario == "fig6")
                detail::run_fig6(ctx);
            else if (scenario == "fig7")
                detail::run_fig7(ctx);
            else if (scenario == "sweep")
                detail::run_sweep(ctx);
            else if (scenario == "check")
                detail::run_check(ctx);
            else
            {
                err << "unknown subcommand '" << scenario << "'\n";
                return usage_error;
            }
            detail::write_manifest(ctx, scenario);
        }
        catch (const std::ios_base::failure &e)
        {
            err << "output error: " << e.what() << '\n';
            return output_unwritable;
        }
        catch (const std::exception &e)
        {
            err << "error: " << e.what() << '\n';
            return runtime_failure;
        }
        return success;
    }

    // Command-line entry: <tool> <subcommand> --config <path> --out <dir> [--scale f] [--threads n]
    inline int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
    {
        CLI::App app{"Near-field focusing with dynamic polarization control: channel, beamforming and sweep simulator",
                     "nfpol"};
        app.set_version_flag("--version", std::string(version));
        app.require_subcommand(1);

        std::string config_path;
        std::string out_dir;
        double scale = 1.0;
        unsigned threads = 0;

        const std::vector<std::pair<std::string, std::string>> descriptions{
            {"fig3", "per-antenna DPC polarization angles (d = 15 cm and 100 cm, v = z)"},
            {"fig5", "SNR improvement box statistics versus alpha at a fixed distance"},
            {"fig6", "SNR improvement box statistics versus distance at a fixed alpha"},
            {"fig7", "ergodic achievable rates versus distance"},
            {"sweep", "custom alpha x distance sweep with statistics and rates"},
            {"check", "narrowband validity (delay spread) table"},
        };
        for (const auto &[name, text] : descriptions)
        {
            auto *sub = app.add_subcommand(name, text);
            sub->add_option("--config", config_path, "config file (key = value)")->required();
            sub->add_option("--out", out_dir, "output directory")->required();
            sub->add_option("--scale", scale, "multiply the array radius by this factor")
                ->check(CLI::PositiveNumber);
            sub->add_option("--threads", threads, "worker threads (0: all cores)");
        }

        try
        {
            app.parse(argc, argv);
        }
        catch (const CLI::ParseError &e)
        {
            const int code = app.exit(e, out, err);
            return code == 0 ? success : usage_error;
        }

        const std::string scenario = app.get_subcommands().front()->get_name();
        return run_scenario(scenario, config_path, out_dir, scale, threads, err);
    }
}
