#pragma once

// Distributed-parameter model of a single-circuit transmission line in
// sinusoidal steady state. Lengths are km, frequencies Hz, impedances ohm.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>

#include "errors.hpp"

namespace tunedline {

using complex = std::complex<double>;

/// Wave velocity assumed for overhead lines, km/s.
inline constexpr double speed_of_light_km_s = 3.0e5;

/// Supply frequency. Always strictly positive and finite.
class Frequency {
public:
    explicit Frequency(double hz) : hz_(hz) {
        detail::require(std::isfinite(hz) && hz > 0.0, "frequency must be positive and finite");
    }

    double hz() const noexcept { return hz_; }
    double omega() const noexcept { return 2.0 * std::numbers::pi * hz_; }

    friend bool operator==(const Frequency&, const Frequency&) = default;

private:
    double hz_;
};

/// Per-unit-length line constants.
struct LineParameters {
    double r = 0.0; ///< series resistance, ohm/km
    double L = 0.0; ///< series inductance, H/km
    double g = 0.0; ///< shunt conductance, S/km
    double C = 0.0; ///< shunt capacitance, F/km

    bool is_lossless() const noexcept { return r == 0.0 && g == 0.0; }

    /// Throws std::invalid_argument unless r, g >= 0 and L, C > 0 (all finite).
    void validate() const {
        detail::require(std::isfinite(L) && L > 0.0, "line inductance L must be positive");
        detail::require(std::isfinite(C) && C > 0.0, "line capacitance C must be positive");
        detail::require(std::isfinite(r) && r >= 0.0, "line resistance r must be non-negative");
        detail::require(std::isfinite(g) && g >= 0.0, "line conductance g must be non-negative");
    }

    complex series_impedance(const Frequency& f) const { return {r, f.omega() * L}; }
    complex shunt_admittance(const Frequency& f) const { return {g, f.omega() * C}; }
};

/// Lossless profile with 1/sqrt(LC) equal to the nominal speed of light and
/// a 300 ohm surge impedance. C is derived from L so that the wave velocity
/// is as close to 3e5 km/s as double arithmetic allows.
inline LineParameters default_line_profile() {
    constexpr double inductance = 1.0e-3;
    return LineParameters{
        .r = 0.0,
        .L = inductance,
        .g = 0.0,
        .C = 1.0 / (inductance * speed_of_light_km_s * speed_of_light_km_s),
    };
}

struct WaveQuantities {
    complex gamma; ///< propagation constant, 1/km
    complex zc;    ///< characteristic impedance, ohm
};

/// Propagation constant sqrt(zy) and surge impedance sqrt(z/y).
///
/// Both roots are taken on the branch with non-negative real part. Since
/// z and y lie in the closed first quadrant, sqrt(z)*sqrt(y) and
/// sqrt(z)/sqrt(y) pick that branch without any sign fix-up. The lossless
/// case is evaluated in closed form so it is exactly imaginary/real.
inline WaveQuantities wave_quantities(const LineParameters& params, const Frequency& freq) {
    params.validate();
    if (params.is_lossless()) {
        return {complex{0.0, freq.omega() * std::sqrt(params.L * params.C)},
                complex{std::sqrt(params.L / params.C), 0.0}};
    }
    const complex sz = std::sqrt(params.series_impedance(freq));
    const complex sy = std::sqrt(params.shunt_admittance(freq));
    return {sz * sy, sz / sy};
}

/// Electrical length omega * l * sqrt(LC) in radians (lossless phase).
inline double electrical_length(const LineParameters& params, double length_km, const Frequency& freq) {
    return freq.omega() * length_km * std::sqrt(params.L * params.C);
}

/// Transmission (ABCD) matrix:
///   [Vs]   [a b] [Vr]
///   [Is] = [c d] [Ir]
struct TwoPort {
    complex a{1.0, 0.0};
    complex b{0.0, 0.0};
    complex c{0.0, 0.0};
    complex d{1.0, 0.0};

    static TwoPort identity() { return {}; }

    complex determinant() const { return a * d - b * c; }

    bool is_reciprocal(double tol = 1e-10) const {
        const complex err = determinant() - 1.0;
        return std::abs(err.real()) < tol && std::abs(err.imag()) < tol;
    }

    TwoPort operator-() const { return {-a, -b, -c, -d}; }

    friend bool operator==(const TwoPort&, const TwoPort&) = default;
};

/// Matrix product first*second; `first` sits at the sending end.
inline TwoPort cascade(const TwoPort& first, const TwoPort& second) {
    return {
        first.a * second.a + first.b * second.c,
        first.a * second.b + first.b * second.d,
        first.c * second.a + first.d * second.c,
        first.c * second.b + first.d * second.d,
    };
}

namespace detail {

inline void require_length(double length_km) {
    require(std::isfinite(length_km) && length_km > 0.0, "line length must be positive");
}

} // namespace detail

/// Exact long-line two-port: a = d = cosh(gamma l), b = zc sinh(gamma l),
/// c = sinh(gamma l) / zc.
inline TwoPort abcd_exact(const LineParameters& params, double length_km, const Frequency& freq) {
    detail::require_length(length_km);
    const auto [gamma, zc] = wave_quantities(params, freq);
    const complex gl = gamma * length_km;
    const complex ch = std::cosh(gl);
    const complex sh = std::sinh(gl);
    return {ch, zc * sh, sh / zc, ch};
}

/// Closed form of abcd_exact for r = g = 0.
inline TwoPort abcd_lossless(const LineParameters& params, double length_km, const Frequency& freq) {
    params.validate();
    detail::require(params.is_lossless(), "abcd_lossless requires r = 0 and g = 0");
    detail::require_length(length_km);
    const double theta = electrical_length(params, length_km, freq);
    const double zc = std::sqrt(params.L / params.C);
    const double cs = std::cos(theta);
    const double sn = std::sin(theta);
    return {complex{cs, 0.0}, complex{0.0, zc * sn}, complex{0.0, sn / zc}, complex{cs, 0.0}};
}

/// Single lumped nominal-pi section: total series Z, half of total shunt Y
/// at each terminal.
inline TwoPort nominal_pi(const LineParameters& params, double length_km, const Frequency& freq) {
    params.validate();
    detail::require_length(length_km);
    const complex z = params.series_impedance(freq) * length_km;
    const complex y = params.shunt_admittance(freq) * length_km;
    const complex zy = z * y;
    const complex ad = 1.0 + zy / 2.0;
    return {ad, z, y * (1.0 + zy / 4.0), ad};
}

/// Cascade of `sections` equal nominal-pi segments. Converges to
/// abcd_exact as O(1/sections^2); used as an independent check of the
/// hyperbolic closed form.
inline TwoPort pi_cascade_oracle(const LineParameters& params, double length_km, const Frequency& freq,
                                 std::size_t sections) {
    detail::require(sections >= 1, "pi cascade needs at least one section");
    const TwoPort segment = nominal_pi(params, length_km / static_cast<double>(sections), freq);
    TwoPort result = segment;
    for (std::size_t i = 1; i < sections; ++i) {
        result = cascade(result, segment);
    }
    return result;
}

} // namespace tunedline
