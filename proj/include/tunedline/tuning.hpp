#pragma once

// Tuned-line condition omega * l * sqrt(LC) = n * pi, solved for length at
// a fixed frequency or for frequency at a fixed length.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "linemodel.hpp"

namespace tunedline {

/// Wave velocity 1/sqrt(LC) in km/s.
class PropagationVelocity {
public:
    explicit PropagationVelocity(double km_per_s = speed_of_light_km_s) : v_(km_per_s) {
        detail::require(std::isfinite(km_per_s) && km_per_s > 0.0, "propagation velocity must be positive");
    }

    static PropagationVelocity of(const LineParameters& params) {
        params.validate();
        return PropagationVelocity{1.0 / std::sqrt(params.L * params.C)};
    }

    double km_per_s() const noexcept { return v_; }

private:
    double v_;
};

inline constexpr std::size_t default_harmonic_count = 3;

/// Harmonic index with the tuned frequency (Hz) or tuned length (km),
/// depending on which quantity was solved for.
struct TuningSolution {
    unsigned n = 0;
    double value = 0.0;

    friend bool operator==(const TuningSolution&, const TuningSolution&) = default;
};

/// l_n = n v / (2 f) for n = 1..n_max.
inline std::vector<TuningSolution> tuned_lengths(const Frequency& freq, const PropagationVelocity& velocity,
                                                 std::size_t n_max = default_harmonic_count) {
    detail::require(n_max >= 1, "n_max must be at least 1");
    std::vector<TuningSolution> out;
    out.reserve(n_max);
    for (std::size_t n = 1; n <= n_max; ++n) {
        out.push_back({static_cast<unsigned>(n), static_cast<double>(n) * velocity.km_per_s() / (2.0 * freq.hz())});
    }
    return out;
}

/// f_n = n v / (2 l) for n = 1..n_max.
inline std::vector<TuningSolution> tuning_frequencies(double length_km, const PropagationVelocity& velocity,
                                                      std::size_t n_max = default_harmonic_count) {
    detail::require(std::isfinite(length_km) && length_km > 0.0, "line length must be positive");
    detail::require(n_max >= 1, "n_max must be at least 1");
    std::vector<TuningSolution> out;
    out.reserve(n_max);
    for (std::size_t n = 1; n <= n_max; ++n) {
        out.push_back({static_cast<unsigned>(n), static_cast<double>(n) * velocity.km_per_s() / (2.0 * length_km)});
    }
    return out;
}

struct TuningCheck {
    bool tuned = false;
    TuningSolution nearest; ///< nearest tuning frequency (Hz), n >= 1
};

/// Tuned iff the half-wavelength count 2 f l / v is within rel_tol of a
/// positive integer.
inline TuningCheck is_tuned(double length_km, const Frequency& freq, const PropagationVelocity& velocity,
                            double rel_tol) {
    detail::require(rel_tol > 0.0 && rel_tol < 0.5, "rel_tol must lie in (0, 0.5)");
    detail::require(std::isfinite(length_km) && length_km > 0.0, "line length must be positive");
    const double half_waves = 2.0 * freq.hz() * length_km / velocity.km_per_s();
    const double rounded = std::round(half_waves);
    const bool tuned = rounded >= 1.0 && std::abs(half_waves - rounded) <= rel_tol;
    const double n = std::max(1.0, rounded);
    return {tuned, {static_cast<unsigned>(n), n * velocity.km_per_s() / (2.0 * length_km)}};
}

} // namespace tunedline
