#pragma once

#include <stdexcept>
#include <string>

namespace vblob {

/// Bad numerical parameter (outside the range where a statement holds).
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Assignment grid does not cover the support of the initial data.
struct CoverageError : std::runtime_error {
    double mass_deficit;
    explicit CoverageError(const std::string& msg, double deficit)
        : std::runtime_error(msg), mass_deficit(deficit) {}
};

/// Two sampled objects were expected to live on the same grid.
struct GridMismatchError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A trajectory left the configured bound during integration.
struct BlowUpError : std::runtime_error {
    double max_norm;
    double time;
    BlowUpError(const std::string& msg, double mx, double t)
        : std::runtime_error(msg), max_norm(mx), time(t) {}
};

/// Invalid or incomplete run configuration.
struct ConfigError : std::invalid_argument {
    std::string key;
    ConfigError(const std::string& msg, std::string k)
        : std::invalid_argument(msg), key(std::move(k)) {}
};

}  // namespace vblob
