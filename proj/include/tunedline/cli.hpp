#pragma once

// Command-line front end: `tuning`, `solve` and `sweep`.
//
// Exit codes: 0 success, 2 config/argument error, 3 singular operating
// point (solve only), 4 I/O error.

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "io/config.hpp"
#include "io/report.hpp"
#include "sweep.hpp"
#include "tuning.hpp"

namespace tunedline::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 2,
    exit_singular = 3,
    exit_io = 4,
};

struct TuningArgs {
    std::optional<double> length_km;
    std::optional<double> frequency_hz;
    double velocity = speed_of_light_km_s;
    std::size_t n_max = default_harmonic_count;
    std::string format = "table";
};

inline int cmd_tuning(const TuningArgs& args, std::ostream& out, std::ostream& err) {
    if (args.length_km.has_value() == args.frequency_hz.has_value()) {
        err << "error: tuning needs exactly one of --length or --frequency\n";
        return exit_usage;
    }
    std::vector<TuningSolution> rows;
    std::string unit;
    try {
        const PropagationVelocity v{args.velocity};
        if (args.length_km) {
            rows = tuning_frequencies(*args.length_km, v, args.n_max);
            unit = "Hz";
        } else {
            rows = tuned_lengths(Frequency{*args.frequency_hz}, v, args.n_max);
            unit = "km";
        }
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

    if (args.format == "json") {
        auto arr = nlohmann::json::array();
        for (const auto& r : rows) {
            arr.push_back({{"n", r.n}, {"value", r.value}, {"unit", unit}});
        }
        out << arr.dump(2) << '\n';
    } else if (args.format == "csv") {
        out << "n,value,unit\n";
        for (const auto& r : rows) {
            out << r.n << ',' << io::format_number(r.value) << ',' << unit << '\n';
        }
    } else {
        out << std::setw(4) << "n" << "  " << std::setw(14) << "value" << "  unit\n";
        for (const auto& r : rows) {
            out << std::setw(4) << r.n << "  " << std::setw(14) << std::setprecision(12) << r.value << "  " << unit
                << '\n';
        }
    }
    return exit_ok;
}

struct SolveArgs {
    std::string config;
    double frequency_hz = 0.0;
    std::string format = "text";
    std::string out;
};

inline int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err) {
    SweepConfig cfg;
    std::optional<Frequency> freq;
    try {
        cfg = io::load_config(args.config);
        freq.emplace(args.frequency_hz);
    } catch (const io::ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

    SweepRecord record;
    try {
        record = solve_point(cfg, *freq);
    } catch (const ResonanceError& e) {
        err << "error: " << e.what() << '\n';
        return exit_singular;
    }
    const io::ReportRow row = io::to_report_row(record);
    const std::string json = io::to_json(row).dump(2) + "\n";

    if (args.format == "json") {
        out << json;
    } else {
        out << "frequency        " << row.f_hz << " Hz\n"
            << "active power     " << row.p_r_mw << " MW\n"
            << "load reactive    " << row.q_r_mvar << " MVAr\n"
            << "line reactive    " << row.q_line_mvar << " MVAr\n"
            << "|Vs|             " << row.vs_kv << " kV\n"
            << "|Vr|             " << row.vr_kv << " kV\n"
            << "regulation       " << row.delta_v << '\n';
    }
    if (!args.out.empty()) {
        try {
            io::write_file_atomic(args.out, json);
        } catch (const io::IoError& e) {
            err << "error: " << e.what() << '\n';
            return exit_io;
        }
    }
    return exit_ok;
}

struct SweepArgs {
    std::string config;
    std::string out;
    std::string format = "csv";
    bool plot_data = false;
};

/// Sidecar paths derived from the results path: results.csv ->
/// results.dips.json, results.manifest.json, results.<quantity>.dat.
inline std::filesystem::path sidecar_path(const std::filesystem::path& out, const std::string& suffix) {
    std::filesystem::path p = out;
    p.replace_extension();
    p += suffix;
    return p;
}

inline int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
    SweepConfig cfg;
    try {
        cfg = io::load_config(args.config);
    } catch (const io::ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

    const auto records = run_sweep(cfg);
    const auto rows = io::to_report_rows(records);
    std::vector<TuningDip> dips;
    try {
        dips = detect_tuning_dips(records, cfg.length_km, PropagationVelocity::of(cfg.line));
    } catch (const InsufficientDataError& e) {
        err << "warning: " << e.what() << '\n';
    }

    const std::filesystem::path results{args.out};
    io::RunManifest manifest;
    manifest.config_digest = io::config_digest(cfg);
    try {
        io::write_file_atomic(results, args.format == "json" ? io::to_json(rows).dump(2) + "\n" : io::to_csv(rows));
        manifest.outputs.push_back(results.string());

        const auto dips_path = sidecar_path(results, ".dips.json");
        io::write_file_atomic(dips_path, io::dips_to_json(dips).dump(2) + "\n");
        manifest.outputs.push_back(dips_path.string());

        if (args.plot_data) {
            const std::pair<const char*, double io::ReportRow::*> quantities[] = {
                {"p_r_mw", &io::ReportRow::p_r_mw},
                {"q_line_mvar", &io::ReportRow::q_line_mvar},
                {"q_r_mvar", &io::ReportRow::q_r_mvar},
                {"vr_kv", &io::ReportRow::vr_kv},
            };
            for (const auto& [name, field] : quantities) {
                const auto path = sidecar_path(results, std::string(".") + name + ".dat");
                io::write_file_atomic(path, io::plot_data(rows, field, name));
                manifest.outputs.push_back(path.string());
            }
        }

        manifest.timestamp = io::utc_timestamp();
        io::write_file_atomic(sidecar_path(results, ".manifest.json"), manifest.to_json().dump(2) + "\n");
    } catch (const io::IoError& e) {
        err << "error: " << e.what() << '\n';
        return exit_io;
    }

    std::size_t singular = 0;
    for (const auto& r : records) {
        singular += r.singular ? 1 : 0;
    }
    out << "swept " << records.size() << " points (" << singular << " singular), wrote " << results.string() << '\n';
    for (const auto& d : dips) {
        out << "  dip at " << d.f_detected << " Hz";
        if (d.n_matched > 0) {
            out << "  (harmonic n = " << d.n_matched << ")";
        } else {
            out << "  (no harmonic)";
        }
        out << '\n';
    }
    return exit_ok;
}

/// Parses argv and dispatches. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Steady-state analysis of tuned long HVAC transmission lines", "tunedline"};
    app.set_version_flag("--version", std::string(io::tool_version));
    app.require_subcommand(1);

    TuningArgs tuning;
    auto* tuning_cmd = app.add_subcommand("tuning", "Tuning frequencies for a length, or tuned lengths for a frequency");
    auto* length_opt = tuning_cmd->add_option("--length", tuning.length_km, "Line length (km)");
    auto* freq_opt = tuning_cmd->add_option("--frequency", tuning.frequency_hz, "Supply frequency (Hz)");
    length_opt->excludes(freq_opt);
    tuning_cmd->add_option("--velocity", tuning.velocity, "Wave velocity (km/s)")->capture_default_str();
    tuning_cmd->add_option("--n-max", tuning.n_max, "Number of harmonics")->capture_default_str();
    tuning_cmd->add_option("--format", tuning.format, "Output format")
        ->check(CLI::IsMember({"table", "csv", "json"}))
        ->capture_default_str();

    SolveArgs solve;
    auto* solve_cmd = app.add_subcommand("solve", "Solve one operating point of a config");
    solve_cmd->add_option("--config", solve.config, "Experiment config file")->required();
    solve_cmd->add_option("--frequency", solve.frequency_hz, "Supply frequency (Hz)")->required();
    solve_cmd->add_option("--format", solve.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    solve_cmd->add_option("--out", solve.out, "Also write the JSON report to this path");

    SweepArgs sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "Frequency sweep with dip detection");
    sweep_cmd->add_option("--config", sweep.config, "Experiment config file")->required();
    sweep_cmd->add_option("--out", sweep.out, "Results file")->required();
    sweep_cmd->add_option("--format", sweep.format, "Results format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sweep_cmd->add_flag("--plot-data", sweep.plot_data, "Also write two-column .dat files per quantity");

    std::vector<std::string> argv_storage;
    argv_storage.reserve(args.size() + 1);
    argv_storage.emplace_back("tunedline");
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_storage) {
        argv.push_back(a.data());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::CallForVersion&) {
        out << io::tool_version << '\n';
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

    if (tuning_cmd->parsed()) {
        return cmd_tuning(tuning, out, err);
    }
    if (solve_cmd->parsed()) {
        return cmd_solve(solve, out, err);
    }
    return cmd_sweep(sweep, out, err);
}

} // namespace tunedline::cli
