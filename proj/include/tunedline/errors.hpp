#pragma once

#include <stdexcept>
#include <string>

namespace tunedline {

/// Raised when a source-line-load operating point has no finite solution
/// (ideal source driving a series-resonant line/load combination).
class ResonanceError : public std::runtime_error {
public:
    explicit ResonanceError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when an analysis needs more usable samples than it was given.
class InsufficientDataError : public std::runtime_error {
public:
    explicit InsufficientDataError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void require(bool condition, const char* message) {
    if (!condition) {
        throw std::invalid_argument(message);
    }
}

} // namespace detail
} // namespace tunedline
