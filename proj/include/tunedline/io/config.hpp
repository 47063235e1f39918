#pragma once

// Experiment config files: INI-style sections [line], [load], [source],
// [sweep]. Values may carry a unit suffix ("500 km", "220 kV", "100 MVAr");
// a bare number is read in the key's base unit.
//
//   [line]
//   profile = default          ; optional: lossless 1 mH/km, v = 3e5 km/s
//   length  = 500 km
//   r, L, g, C                 ; ohm/km, H/km, S/km, F/km
//   velocity = 300000 km/s     ; optional: derives C = 1 / (L v^2)
//
//   [load]
//   kind = fixed-capacitance-rated | admittance | impedance
//   rated_q, rated_v, rated_f, g_load, c_load, r_load, l_load
//
//   [source]
//   source_voltage = 220 kV    ; line-to-line RMS
//
//   [sweep]
//   f_start, f_end, n_points, model = exact | lossless | pi-cascade(N), threads

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "../sweep.hpp"

namespace tunedline::io {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class Dimension {
    length,
    frequency,
    voltage,
    reactive_power,
    active_power,
    resistance_per_km,
    inductance_per_km,
    conductance_per_km,
    capacitance_per_km,
    velocity,
    conductance,
    capacitance,
    resistance,
    inductance,
    count,
};

namespace detail {

struct UnitFactor {
    std::string_view suffix;
    double factor;
};

inline std::vector<UnitFactor> units_for(Dimension dim) {
    switch (dim) {
    case Dimension::length:
        return {{"km", 1.0}, {"m", 1e-3}};
    case Dimension::frequency:
        return {{"hz", 1.0}, {"khz", 1e3}};
    case Dimension::voltage:
        return {{"v", 1.0}, {"kv", 1e3}};
    case Dimension::reactive_power:
        return {{"var", 1.0}, {"kvar", 1e3}, {"mvar", 1e6}};
    case Dimension::active_power:
        return {{"w", 1.0}, {"kw", 1e3}, {"mw", 1e6}};
    case Dimension::resistance_per_km:
        return {{"ohm/km", 1.0}};
    case Dimension::inductance_per_km:
        return {{"h/km", 1.0}, {"mh/km", 1e-3}};
    case Dimension::conductance_per_km:
        return {{"s/km", 1.0}};
    case Dimension::capacitance_per_km:
        return {{"f/km", 1.0}, {"uf/km", 1e-6}, {"nf/km", 1e-9}};
    case Dimension::velocity:
        return {{"km/s", 1.0}};
    case Dimension::conductance:
        return {{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}};
    case Dimension::capacitance:
        return {{"f", 1.0}, {"uf", 1e-6}, {"nf", 1e-9}};
    case Dimension::resistance:
        return {{"ohm", 1.0}};
    case Dimension::inductance:
        return {{"h", 1.0}, {"mh", 1e-3}};
    case Dimension::count:
        return {};
    }
    return {};
}

inline std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

} // namespace detail

/// Parses "<number> [unit]" into the dimension's base unit.
inline double parse_quantity(std::string_view text, Dimension dim, const std::string& key) {
    const std::string s = detail::trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr == s.data()) {
        throw ConfigError(key + ": expected a number, got '" + s + "'");
    }
    const std::string unit = detail::lower(detail::trim(std::string_view(ptr, s.data() + s.size() - ptr)));
    if (!std::isfinite(value)) {
        throw ConfigError(key + ": value must be finite");
    }
    if (unit.empty()) {
        return value;
    }
    for (const auto& u : detail::units_for(dim)) {
        if (unit == u.suffix) {
            return value * u.factor;
        }
    }
    throw ConfigError(key + ": unsupported unit '" + unit + "'");
}

namespace detail {

class SectionReader {
public:
    SectionReader(const boost::property_tree::ptree& root, std::string name) : name_(std::move(name)) {
        if (const auto child = root.get_child_optional(name_)) {
            section_ = &*child;
        }
    }

    bool present() const { return section_ != nullptr; }

    std::optional<std::string> text(const std::string& key) {
        seen_.insert(key);
        if (section_ == nullptr) {
            return std::nullopt;
        }
        if (const auto v = section_->get_optional<std::string>(key)) {
            return trim(*v);
        }
        return std::nullopt;
    }

    std::optional<double> quantity(const std::string& key, Dimension dim) {
        if (const auto t = text(key)) {
            return parse_quantity(*t, dim, name_ + "." + key);
        }
        return std::nullopt;
    }

    double required(const std::string& key, Dimension dim) {
        if (const auto q = quantity(key, dim)) {
            return *q;
        }
        throw ConfigError("missing required key " + name_ + "." + key);
    }

    /// Rejects keys nobody asked for (typos, misplaced keys).
    void reject_unknown() const {
        if (section_ == nullptr) {
            return;
        }
        for (const auto& [key, child] : *section_) {
            if (!seen_.contains(key)) {
                throw ConfigError("unknown key " + name_ + "." + key);
            }
        }
    }

private:
    std::string name_;
    const boost::property_tree::ptree* section_ = nullptr;
    std::set<std::string> seen_;
};

inline std::size_t parse_count(const std::string& text, const std::string& key) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError(key + ": expected a non-negative integer, got '" + text + "'");
    }
    return value;
}

inline LineModel parse_model(const std::string& text) {
    const std::string s = lower(text);
    if (s == "exact") {
        return LineModel::exact();
    }
    if (s == "lossless") {
        return LineModel::lossless();
    }
    constexpr std::string_view prefix = "pi-cascade(";
    if (s.starts_with(prefix) && s.ends_with(")")) {
        const std::string inner = trim(std::string_view(s).substr(prefix.size(), s.size() - prefix.size() - 1));
        return LineModel::pi_cascade(parse_count(inner, "sweep.model"));
    }
    throw ConfigError("sweep.model: expected exact, lossless or pi-cascade(N), got '" + text + "'");
}

} // namespace detail

/// Builds a validated SweepConfig from INI text. Throws ConfigError.
inline SweepConfig parse_config(std::istream& in) {
    boost::property_tree::ptree root;
    try {
        boost::property_tree::ini_parser::read_ini(in, root);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError("malformed config: " + e.message() + " (line " + std::to_string(e.line()) + ")");
    }
    static const std::set<std::string> sections{"line", "load", "source", "sweep"};
    for (const auto& [name, child] : root) {
        if (!sections.contains(name)) {
            throw ConfigError("unknown section [" + name + "]");
        }
        if (child.empty() && !child.data().empty()) {
            throw ConfigError("key '" + name + "' outside of any section");
        }
    }

    SweepConfig cfg;
    try {
        detail::SectionReader line(root, "line");
        const std::string profile = detail::lower(line.text("profile").value_or("default"));
        if (profile == "default") {
            cfg.line = default_line_profile();
        } else if (profile == "none") {
            cfg.line = LineParameters{};
        } else {
            throw ConfigError("line.profile: expected 'default' or 'none', got '" + profile + "'");
        }
        cfg.length_km = line.required("length", Dimension::length);
        if (const auto r = line.quantity("r", Dimension::resistance_per_km)) cfg.line.r = *r;
        if (const auto l = line.quantity("L", Dimension::inductance_per_km)) cfg.line.L = *l;
        if (const auto g = line.quantity("g", Dimension::conductance_per_km)) cfg.line.g = *g;
        const auto c = line.quantity("C", Dimension::capacitance_per_km);
        const auto velocity = line.quantity("velocity", Dimension::velocity);
        if (c && velocity) {
            throw ConfigError("line: give either C or velocity, not both");
        }
        if (c) {
            cfg.line.C = *c;
        } else if (velocity) {
            if (!(*velocity > 0.0) || !(cfg.line.L > 0.0)) {
                throw ConfigError("line.velocity: needs positive velocity and L");
            }
            cfg.line.C = 1.0 / (cfg.line.L * *velocity * *velocity);
        }
        line.reject_unknown();

        detail::SectionReader load(root, "load");
        if (!load.present()) {
            throw ConfigError("missing section [load]");
        }
        const std::string kind = detail::lower(load.text("kind").value_or(""));
        if (kind == "fixed-capacitance-rated") {
            const double q = load.required("rated_q", Dimension::reactive_power);
            const double v = load.required("rated_v", Dimension::voltage);
            const double f = load.required("rated_f", Dimension::frequency);
            const double g = load.quantity("g_load", Dimension::conductance).value_or(0.0);
            cfg.load = LoadSpec::rated_capacitor(q, v, f, g);
        } else if (kind == "admittance") {
            cfg.load = LoadSpec::admittance(load.quantity("g_load", Dimension::conductance).value_or(0.0),
                                            load.quantity("c_load", Dimension::capacitance).value_or(0.0));
        } else if (kind == "impedance") {
            cfg.load = LoadSpec::impedance(load.quantity("r_load", Dimension::resistance).value_or(0.0),
                                           load.quantity("l_load", Dimension::inductance).value_or(0.0));
        } else {
            throw ConfigError("load.kind: expected fixed-capacitance-rated, admittance or impedance, got '" + kind +
                              "'");
        }
        load.reject_unknown();

        detail::SectionReader source(root, "source");
        cfg.source_voltage = source.required("source_voltage", Dimension::voltage);
        source.reject_unknown();

        detail::SectionReader sweep(root, "sweep");
        if (const auto f = sweep.quantity("f_start", Dimension::frequency)) cfg.f_start = *f;
        if (const auto f = sweep.quantity("f_end", Dimension::frequency)) cfg.f_end = *f;
        if (const auto n = sweep.text("n_points")) cfg.n_points = detail::parse_count(*n, "sweep.n_points");
        if (const auto m = sweep.text("model")) cfg.model = detail::parse_model(*m);
        if (const auto t = sweep.text("threads")) {
            cfg.threads = static_cast<unsigned>(detail::parse_count(*t, "sweep.threads"));
        }
        sweep.reject_unknown();

        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

inline SweepConfig parse_config(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

inline SweepConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file " + path.string());
    }
    return parse_config(in);
}

} // namespace tunedline::io
