#pragma once

#include <stdexcept>
#include <string>

namespace dtle {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
    using Error::Error;
};

struct SingularMatrixError : Error {
    using Error::Error;
};

struct NotSymmetricError : Error {
    using Error::Error;
};

struct PartitionError : Error {
    using Error::Error;
};

struct ParameterError : Error {
    using Error::Error;
};

struct GraphError : Error {
    using Error::Error;
};

struct ScheduleError : Error {
    using Error::Error;
};

struct DivergenceError : Error {
    DivergenceError(long round_, const std::string& msg) : Error(msg), round(round_) {}
    long round;
};

struct RateEstimationError : Error {
    using Error::Error;
};

struct ReferenceError : Error {
    using Error::Error;
};

struct NoUniqueSolutionError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    ConfigError(int line_, const std::string& msg)
        : Error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
    explicit ConfigError(const std::string& msg) : Error(msg), line(0) {}
    int line;
};

struct FixtureError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace dtle
