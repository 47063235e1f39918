#pragma once

// Frequency sweep of an ideal source -> line -> load system.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "linemodel.hpp"
#include "powerflow.hpp"
#include "tuning.hpp"

namespace tunedline {

enum class ModelKind { exact, lossless, pi_cascade };

struct LineModel {
    ModelKind kind = ModelKind::exact;
    std::size_t sections = 0; ///< pi_cascade only

    static LineModel exact() { return {ModelKind::exact, 0}; }
    static LineModel lossless() { return {ModelKind::lossless, 0}; }
    static LineModel pi_cascade(std::size_t sections) { return {ModelKind::pi_cascade, sections}; }

    TwoPort build(const LineParameters& params, double length_km, const Frequency& freq) const {
        switch (kind) {
        case ModelKind::exact:
            return abcd_exact(params, length_km, freq);
        case ModelKind::lossless:
            return abcd_lossless(params, length_km, freq);
        case ModelKind::pi_cascade:
            return pi_cascade_oracle(params, length_km, freq, sections);
        }
        return abcd_exact(params, length_km, freq);
    }

    friend bool operator==(const LineModel&, const LineModel&) = default;
};

struct SweepConfig {
    LineParameters line = default_line_profile();
    double length_km = 0.0;
    double source_voltage = 0.0; ///< V, line-to-line RMS
    LoadSpec load;
    double f_start = 50.0;
    double f_end = 1000.0;
    std::size_t n_points = 951;
    LineModel model;
    unsigned threads = 1; ///< worker threads; output order never depends on it

    void validate() const {
        line.validate();
        detail::require(std::isfinite(length_km) && length_km > 0.0, "sweep: length must be positive");
        detail::require(std::isfinite(source_voltage) && source_voltage > 0.0,
                        "sweep: source voltage must be positive");
        detail::require(std::isfinite(f_start) && f_start > 0.0, "sweep: f_start must be positive");
        detail::require(std::isfinite(f_end) && f_start < f_end, "sweep: f_start must be below f_end");
        detail::require(n_points >= 2, "sweep: n_points must be at least 2");
        detail::require(model.kind != ModelKind::pi_cascade || model.sections >= 1,
                        "sweep: pi-cascade needs at least one section");
        detail::require(model.kind != ModelKind::lossless || line.is_lossless(),
                        "sweep: lossless model requires r = 0 and g = 0");
        detail::require(threads >= 1, "sweep: threads must be at least 1");
    }

    double grid_step() const { return (f_end - f_start) / static_cast<double>(n_points - 1); }

    double grid_frequency(std::size_t i) const {
        if (i + 1 == n_points) {
            return f_end;
        }
        return f_start + static_cast<double>(i) * grid_step();
    }
};

/// One frequency point. Powers are per phase (W, VAr) and voltages are
/// line-to-neutral magnitudes (V). Singular points carry NaN for every
/// quantity that depends on the receiving-end solution.
struct SweepRecord {
    double f = 0.0;
    double p_r = 0.0;
    double q_r = 0.0;
    double q_line = 0.0;
    double vs_mag = 0.0;
    double vr_mag = 0.0;
    double delta_v = 0.0;
    bool singular = false;
};

/// Solves a single operating point. Throws ResonanceError at a singularity.
inline SweepRecord solve_point(const SweepConfig& cfg, const Frequency& freq) {
    const TwoPort line = cfg.model.build(cfg.line, cfg.length_km, freq);
    const complex vs{cfg.source_voltage / std::sqrt(3.0), 0.0};
    const TerminalState state = solve_receiving_end(line, vs, cfg.load, freq);
    const PowerResult power = complex_power_accounting(state);
    return {freq.hz(), power.p_r, power.q_r, power.q_line, std::abs(state.vs), std::abs(state.vr), power.delta_v,
            false};
}

namespace detail {

inline SweepRecord evaluate_grid_point(const SweepConfig& cfg, std::size_t i) {
    const Frequency freq{cfg.grid_frequency(i)};
    try {
        return solve_point(cfg, freq);
    } catch (const ResonanceError&) {
        constexpr double nan = std::numeric_limits<double>::quiet_NaN();
        return {freq.hz(), nan, nan, nan, cfg.source_voltage / std::sqrt(3.0), nan, nan, true};
    }
}

} // namespace detail

/// Evaluates every grid frequency (uniform, endpoints inclusive). Resonant
/// points are flagged as singular and kept in place.
inline std::vector<SweepRecord> run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    std::vector<SweepRecord> records(cfg.n_points);
    const std::size_t workers = std::min<std::size_t>(cfg.threads, cfg.n_points);
    if (workers <= 1) {
        for (std::size_t i = 0; i < cfg.n_points; ++i) {
            records[i] = detail::evaluate_grid_point(cfg, i);
        }
        return records;
    }
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&cfg, &records, w, workers] {
                for (std::size_t i = w; i < cfg.n_points; i += workers) {
                    records[i] = detail::evaluate_grid_point(cfg, i);
                }
            });
        }
    }
    return records;
}

/// A local minimum of |q_line| and the harmonic it was matched to
/// (n_matched = 0 when no harmonic lies within two grid steps).
struct TuningDip {
    double f_detected = 0.0;
    unsigned n_matched = 0;
    double q_line_at_dip = 0.0;

    friend bool operator==(const TuningDip&, const TuningDip&) = default;
};

/// Finds strict local minima of |q_line| among the non-singular records
/// and matches each to the nearest n v / (2 l). The first and last usable
/// records only have one neighbour and count as minima when strictly below it.
inline std::vector<TuningDip> detect_tuning_dips(const std::vector<SweepRecord>& records, double length_km,
                                                 const PropagationVelocity& velocity) {
    detail::require(std::isfinite(length_km) && length_km > 0.0, "line length must be positive");
    std::vector<const SweepRecord*> usable;
    usable.reserve(records.size());
    for (const auto& r : records) {
        if (!r.singular && std::isfinite(r.q_line)) {
            usable.push_back(&r);
        }
    }
    if (usable.size() < 3) {
        throw InsufficientDataError("dip detection needs at least 3 non-singular records, got " +
                                    std::to_string(usable.size()));
    }
    const double step = (records.back().f - records.front().f) / static_cast<double>(records.size() - 1);
    const double v = velocity.km_per_s();

    std::vector<TuningDip> dips;
    for (std::size_t i = 0; i < usable.size(); ++i) {
        const double here = std::abs(usable[i]->q_line);
        const bool below_left = i == 0 || here < std::abs(usable[i - 1]->q_line);
        const bool below_right = i + 1 == usable.size() || here < std::abs(usable[i + 1]->q_line);
        if (!(below_left && below_right)) {
            continue;
        }
        const double f = usable[i]->f;
        const double n = std::max(1.0, std::round(2.0 * f * length_km / v));
        const double harmonic = n * v / (2.0 * length_km);
        const bool matched = std::abs(f - harmonic) <= 2.0 * step;
        dips.push_back({f, matched ? static_cast<unsigned>(n) : 0U, usable[i]->q_line});
    }
    return dips;
}

} // namespace tunedline
