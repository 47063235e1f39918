#pragma once

// Terminal solution of an ideal source feeding a load through a two-port,
// plus the simplified reactance-model power formulas (P_R, Q_R, regulation).
//
// Phasors are RMS line-to-neutral; powers are per phase. Load convention:
// Q > 0 means inductive VArs are absorbed, so a capacitor has Q < 0.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "linemodel.hpp"

namespace tunedline {

enum class LoadKind {
    admittance,               ///< g_load + j omega c_load
    fixed_capacitance_rated,  ///< capacitor sized from a (Q, V, f) rating, plus optional g_load
    impedance,                ///< series r_load + j omega l_load
};

struct LoadSpec {
    LoadKind kind = LoadKind::admittance;
    double g_load = 0.0;  ///< S (per phase, wye equivalent)
    double c_load = 0.0;  ///< F (per phase, wye equivalent)
    double rated_q = 0.0; ///< VAr, three-phase rating
    double rated_v = 0.0; ///< V, line-to-line rating voltage
    double rated_f = 0.0; ///< Hz
    double r_load = 0.0;  ///< ohm, impedance kind only
    double l_load = 0.0;  ///< H, impedance kind only

    static LoadSpec admittance(double g, double c) {
        detail::require(std::isfinite(g) && g >= 0.0, "load conductance must be non-negative");
        detail::require(std::isfinite(c) && c >= 0.0, "load capacitance must be non-negative");
        LoadSpec s;
        s.kind = LoadKind::admittance;
        s.g_load = g;
        s.c_load = c;
        return s;
    }

    /// Fixed capacitor bank delivering rated_q at rated_v (line-to-line) and
    /// rated_f: c = Q / (2 pi f V^2). Its susceptance then scales with f.
    static LoadSpec rated_capacitor(double rated_q, double rated_v, double rated_f, double g = 0.0) {
        detail::require(std::isfinite(rated_q) && rated_q > 0.0, "rated reactive power must be positive");
        detail::require(std::isfinite(rated_v) && rated_v > 0.0, "rated voltage must be positive");
        detail::require(std::isfinite(rated_f) && rated_f > 0.0, "rated frequency must be positive");
        detail::require(std::isfinite(g) && g >= 0.0, "load conductance must be non-negative");
        LoadSpec s;
        s.kind = LoadKind::fixed_capacitance_rated;
        s.rated_q = rated_q;
        s.rated_v = rated_v;
        s.rated_f = rated_f;
        s.g_load = g;
        s.c_load = rated_q / (2.0 * std::numbers::pi * rated_f * rated_v * rated_v);
        return s;
    }

    static LoadSpec impedance(double r, double l) {
        detail::require(std::isfinite(r) && r >= 0.0, "load resistance must be non-negative");
        detail::require(std::isfinite(l) && l >= 0.0, "load inductance must be non-negative");
        detail::require(r > 0.0 || l > 0.0, "load impedance must be non-zero");
        LoadSpec s;
        s.kind = LoadKind::impedance;
        s.r_load = r;
        s.l_load = l;
        return s;
    }

    complex admittance_at(const Frequency& f) const {
        if (kind == LoadKind::impedance) {
            return 1.0 / complex{r_load, f.omega() * l_load};
        }
        return {g_load, f.omega() * c_load};
    }
};

struct TerminalState {
    complex vs;
    complex is;
    complex vr;
    complex ir;
};

/// Receiving-end solution for an ideal source vs:
///   vr = vs / (a + b y_load),  ir = y_load vr,  is = c vr + d ir.
/// Throws ResonanceError when |a + b y_load| < 1e-9 |a|.
inline TerminalState solve_receiving_end(const TwoPort& line, complex vs, const LoadSpec& load,
                                         const Frequency& freq) {
    const complex y = load.admittance_at(freq);
    const complex denom = line.a + line.b * y;
    if (std::abs(denom) < 1e-9 * std::abs(line.a) || denom == complex{}) {
        throw ResonanceError("series resonance: source sees a short through the line at " +
                             std::to_string(freq.hz()) + " Hz");
    }
    TerminalState s;
    s.vs = vs;
    s.vr = vs / denom;
    s.ir = y * s.vr;
    s.is = line.c * s.vr + line.d * s.ir;
    return s;
}

/// Inputs of the lumped reactance transfer model.
struct PowerTransferInputs {
    double vs_mag = 0.0; ///< |V_S|
    double vr_mag = 0.0; ///< |V_R|
    double delta = 0.0;  ///< torque angle, rad
    double x = 0.0;      ///< line reactance, ohm
};

namespace detail {

inline void require_reactance(double x) {
    require(std::isfinite(x) && x != 0.0, "line reactance X must be non-zero");
}

} // namespace detail

/// P_R = |Vs||Vr| sin(delta) / X
inline double receiving_active_power(const PowerTransferInputs& in) {
    detail::require_reactance(in.x);
    return in.vs_mag * in.vr_mag * std::sin(in.delta) / in.x;
}

/// Q_R = (|Vs||Vr| cos(delta) - |Vr|^2) / X
inline double receiving_reactive_power(const PowerTransferInputs& in) {
    detail::require_reactance(in.x);
    return (in.vs_mag * in.vr_mag * std::cos(in.delta) - in.vr_mag * in.vr_mag) / in.x;
}

/// (|Vs| - |Vr|) / |Vr|
inline double voltage_regulation(double vs_mag, double vr_mag) {
    detail::require(std::isfinite(vr_mag) && vr_mag > 0.0, "receiving-end voltage must be positive");
    return (vs_mag - vr_mag) / vr_mag;
}

/// Q_R rewritten in terms of the regulation: |Vr|^2 ((1 + dV) cos(delta) - 1) / X
inline double reactive_power_with_regulation(double vr_mag, double delta_v, double delta, double x) {
    detail::require_reactance(x);
    return vr_mag * vr_mag * ((1.0 + delta_v) * std::cos(delta) - 1.0) / x;
}

/// Q_R at zero regulation: |Vr|^2 (cos(delta) - 1) / X. Non-positive for X > 0.
inline double reactive_power_tuned(double vr_mag, double delta, double x) {
    detail::require_reactance(x);
    return vr_mag * vr_mag * (std::cos(delta) - 1.0) / x;
}

struct PowerResult {
    double p_r = 0.0;     ///< W delivered to the load
    double q_r = 0.0;     ///< VAr absorbed by the load
    double delta_v = 0.0; ///< voltage regulation
    double q_line = 0.0;  ///< VAr absorbed by the line (sending-end Q minus receiving-end Q)
};

/// Exact per-phase complex-power bookkeeping of a solved line.
inline PowerResult complex_power_accounting(const TerminalState& state) {
    const complex s_r = state.vr * std::conj(state.ir);
    const complex s_s = state.vs * std::conj(state.is);
    PowerResult out;
    out.p_r = s_r.real();
    out.q_r = s_r.imag();
    out.q_line = s_s.imag() - s_r.imag();
    out.delta_v = voltage_regulation(std::abs(state.vs), std::abs(state.vr));
    return out;
}

} // namespace tunedline
