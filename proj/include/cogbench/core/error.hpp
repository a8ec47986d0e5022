#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cogbench {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration: bad agent/task pairing, malformed config file, unknown names.
class ConfigError : public Error {
public:
    using Error::Error;
};

class SingularDesignError : public Error {
public:
    SingularDesignError(std::size_t column, const std::string& column_name)
        : Error("singular design matrix: column '" + column_name + "' (index " +
                std::to_string(column) + ") is degenerate or collinear"),
          column_(column),
          column_name_(column_name) {}

    std::size_t column() const noexcept { return column_; }
    const std::string& column_name() const noexcept { return column_name_; }

private:
    std::size_t column_;
    std::string column_name_;
};

class DegenerateDataError : public Error {
public:
    using Error::Error;
};

class InsufficientDesignError : public Error {
public:
    using Error::Error;
};

class OptimizationError : public Error {
public:
    using Error::Error;
};

class EndpointError : public Error {
public:
    using Error::Error;
};

class NormalizationUndefined : public Error {
public:
    using Error::Error;
};

/// Action on a finished balloon, scoring an incomplete battery and similar misuse.
class EpisodeStateError : public Error {
public:
    using Error::Error;
};

}  // namespace cogbench
