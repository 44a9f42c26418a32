// errors.hpp: Exception types shared by all emsim modules

#pragma once

#include <stdexcept>
#include <string>

namespace emsim {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input-contract failures. The CLI maps these to exit code 1.
struct InvalidInput : Error {
    using Error::Error;
};

struct DimensionError : InvalidInput {
    using InvalidInput::InvalidInput;
};

struct ScheduleError : InvalidInput {
    using InvalidInput::InvalidInput;
};

struct CompileError : InvalidInput {
    using InvalidInput::InvalidInput;
};

class ConfigError : public InvalidInput {
public:
    ConfigError(const std::string& what, int line = 0, int column = 0)
        : InvalidInput(line > 0 ? "line " + std::to_string(line) + ", column " +
                                      std::to_string(column) + ": " + what
                                : what),
          line_(line),
          column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

// Numeric failures. The CLI maps these to exit code 2.
struct NumericError : Error {
    using Error::Error;
};

struct NumericInputError : NumericError {
    using NumericError::NumericError;
};

struct DomainError : NumericError {
    using NumericError::NumericError;
};

struct IntegrationError : NumericError {
    using NumericError::NumericError;
};

struct FitError : NumericError {
    using NumericError::NumericError;
};

struct ConvergenceError : NumericError {
    using NumericError::NumericError;
};

}  // namespace emsim
