#pragma once

// Result serialization: results CSV, dips report, run manifest.
//
// Reported values are three-phase totals in MW / MVAr and line-to-line kV.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>
#include <openssl/evp.h>

#include "../sweep.hpp"

namespace tunedline::io {

inline constexpr std::string_view tool_version = "0.1.0";

inline constexpr std::string_view csv_header = "f_hz,p_r_mw,q_r_mvar,q_line_mvar,vs_kv,vr_kv,delta_v,singular";

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// One CSV row. NaN marks a quantity that does not exist at a singular point.
struct ReportRow {
    double f_hz = 0.0;
    double p_r_mw = 0.0;
    double q_r_mvar = 0.0;
    double q_line_mvar = 0.0;
    double vs_kv = 0.0;
    double vr_kv = 0.0;
    double delta_v = 0.0;
    bool singular = false;
};

inline ReportRow to_report_row(const SweepRecord& r) {
    const double ll = std::sqrt(3.0);
    return {r.f, 3.0 * r.p_r / 1e6, 3.0 * r.q_r / 1e6, 3.0 * r.q_line / 1e6, ll * r.vs_mag / 1e3,
            ll * r.vr_mag / 1e3, r.delta_v, r.singular};
}

inline std::vector<ReportRow> to_report_rows(const std::vector<SweepRecord>& records) {
    std::vector<ReportRow> rows;
    rows.reserve(records.size());
    for (const auto& r : records) {
        rows.push_back(to_report_row(r));
    }
    return rows;
}

/// 17 significant digits; NaN becomes an empty field.
inline std::string format_number(double v) {
    if (std::isnan(v)) {
        return {};
    }
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", v);
    return buf.data();
}

inline void write_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
    out << csv_header << '\n';
    for (const auto& r : rows) {
        out << format_number(r.f_hz) << ',' << format_number(r.p_r_mw) << ',' << format_number(r.q_r_mvar) << ','
            << format_number(r.q_line_mvar) << ',' << format_number(r.vs_kv) << ',' << format_number(r.vr_kv) << ','
            << format_number(r.delta_v) << ',' << (r.singular ? '1' : '0') << '\n';
    }
}

inline std::string to_csv(const std::vector<ReportRow>& rows) {
    std::ostringstream out;
    write_csv(out, rows);
    return out.str();
}

namespace detail {

inline double parse_field(const std::string& field, std::size_t line_no) {
    if (field.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(field, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != field.size()) {
        throw std::runtime_error("csv line " + std::to_string(line_no) + ": bad number '" + field + "'");
    }
    return v;
}

} // namespace detail

inline std::vector<ReportRow> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != csv_header) {
        throw std::runtime_error("csv: unexpected header");
    }
    std::vector<ReportRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            fields.push_back(field);
        }
        if (!line.empty() && line.back() == ',') {
            fields.emplace_back();
        }
        if (fields.size() != 8 || (fields[7] != "0" && fields[7] != "1")) {
            throw std::runtime_error("csv line " + std::to_string(line_no) + ": malformed row");
        }
        ReportRow r;
        r.f_hz = detail::parse_field(fields[0], line_no);
        r.p_r_mw = detail::parse_field(fields[1], line_no);
        r.q_r_mvar = detail::parse_field(fields[2], line_no);
        r.q_line_mvar = detail::parse_field(fields[3], line_no);
        r.vs_kv = detail::parse_field(fields[4], line_no);
        r.vr_kv = detail::parse_field(fields[5], line_no);
        r.delta_v = detail::parse_field(fields[6], line_no);
        r.singular = fields[7] == "1";
        rows.push_back(r);
    }
    return rows;
}

namespace detail {

inline nlohmann::json number_or_null(double v) {
    return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v);
}

} // namespace detail

inline nlohmann::json to_json(const ReportRow& r) {
    return {
        {"f_hz", r.f_hz},
        {"p_r_mw", detail::number_or_null(r.p_r_mw)},
        {"q_r_mvar", detail::number_or_null(r.q_r_mvar)},
        {"q_line_mvar", detail::number_or_null(r.q_line_mvar)},
        {"vs_kv", detail::number_or_null(r.vs_kv)},
        {"vr_kv", detail::number_or_null(r.vr_kv)},
        {"delta_v", detail::number_or_null(r.delta_v)},
        {"singular", r.singular},
    };
}

inline nlohmann::json to_json(const std::vector<ReportRow>& rows) {
    auto arr = nlohmann::json::array();
    for (const auto& r : rows) {
        arr.push_back(to_json(r));
    }
    return arr;
}

inline nlohmann::json dips_to_json(const std::vector<TuningDip>& dips) {
    auto arr = nlohmann::json::array();
    for (const auto& d : dips) {
        arr.push_back({
            {"f_detected_hz", d.f_detected},
            {"n_matched", d.n_matched},
            {"q_line_at_dip_mvar", 3.0 * d.q_line_at_dip / 1e6},
        });
    }
    return arr;
}

/// Canonical form of a resolved config; keys sorted, numbers round-trip exact.
inline nlohmann::json resolved_config_json(const SweepConfig& cfg) {
    const char* model = cfg.model.kind == ModelKind::exact      ? "exact"
                        : cfg.model.kind == ModelKind::lossless ? "lossless"
                                                                : "pi-cascade";
    const char* kind = cfg.load.kind == LoadKind::admittance                ? "admittance"
                       : cfg.load.kind == LoadKind::fixed_capacitance_rated ? "fixed-capacitance-rated"
                                                                            : "impedance";
    return {
        {"line", {{"r", cfg.line.r}, {"L", cfg.line.L}, {"g", cfg.line.g}, {"C", cfg.line.C}, {"length", cfg.length_km}}},
        {"load",
         {{"kind", kind},
          {"g_load", cfg.load.g_load},
          {"c_load", cfg.load.c_load},
          {"rated_q", cfg.load.rated_q},
          {"rated_v", cfg.load.rated_v},
          {"rated_f", cfg.load.rated_f},
          {"r_load", cfg.load.r_load},
          {"l_load", cfg.load.l_load}}},
        {"source", {{"source_voltage", cfg.source_voltage}}},
        {"sweep",
         {{"f_start", cfg.f_start},
          {"f_end", cfg.f_end},
          {"n_points", cfg.n_points},
          {"model", model},
          {"sections", cfg.model.sections}}},
    };
}

inline std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 digest failed");
    }
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    }
    return hex.str();
}

/// Threads are excluded: they never change the results.
inline std::string config_digest(const SweepConfig& cfg) {
    return "sha256:" + sha256_hex(resolved_config_json(cfg).dump());
}

inline std::string utc_timestamp(std::chrono::system_clock::time_point when = std::chrono::system_clock::now()) {
    const std::time_t t = std::chrono::system_clock::to_time_t(when);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::array<char, 32> buf{};
    std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf.data();
}

struct RunManifest {
    std::string config_digest;
    std::string tool_version{io::tool_version};
    std::string timestamp;
    std::vector<std::string> outputs;

    nlohmann::json to_json() const {
        return {{"config_digest", config_digest},
                {"tool_version", tool_version},
                {"timestamp", timestamp},
                {"outputs", outputs}};
    }
};

/// Writes through `<path>.partial` and renames on success, so a failed
/// write never leaves a file under the final name.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    std::filesystem::path partial = path;
    partial += ".partial";
    {
        std::ofstream out(partial, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open " + partial.string() + " for writing");
        }
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) {
            throw IoError("write failed for " + partial.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(partial, path, ec);
    if (ec) {
        throw IoError("cannot rename " + partial.string() + ": " + ec.message());
    }
}

/// Two-column "f value" data for one quantity, gnuplot style.
inline std::string plot_data(const std::vector<ReportRow>& rows, double ReportRow::*field, std::string_view label) {
    std::ostringstream out;
    out << "# f_hz " << label << '\n';
    for (const auto& r : rows) {
        if (r.singular) {
            out << '\n'; // blank line breaks the curve
            continue;
        }
        out << format_number(r.f_hz) << ' ' << format_number(r.*field) << '\n';
    }
    return out.str();
}

} // namespace tunedline::io
