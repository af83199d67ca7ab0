#ifndef FLUXSIM_ERRORS_HPP
#define FLUXSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fluxsim {

// Exit-code mapping used by the CLI: config errors -> 1, physics errors -> 2,
// fit errors -> 3.

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Two dressed states claim the same bare (level, photon) label. Must not be
// silently resolved; flux sweeps catch this and skip-and-flag the point.
struct LabelingError : std::runtime_error {
    explicit LabelingError(const std::string& msg) : std::runtime_error(msg) {}
};

struct CalibrationError : std::runtime_error {
    explicit CalibrationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct FitError : std::runtime_error {
    explicit FitError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fluxsim

#endif
