#pragma once

#include <stdexcept>
#include <string>

namespace diskf {

// Bad model/scenario configuration (dimension mismatch, invalid covariance, ...).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A covariance that should be invertible is numerically singular even after
// the one-shot jitter retry.
class ConditioningError : public std::runtime_error {
public:
    explicit ConditioningError(const std::string& what) : std::runtime_error(what) {}
};

// The input-estimation normal equations are degenerate; callers treat the
// estimate as invalid instead of aborting the step.
class DegenerateEstimateError : public std::runtime_error {
public:
    explicit DegenerateEstimateError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace diskf
