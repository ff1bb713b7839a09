#pragma once

#include <stdexcept>
#include <string>

namespace flyatom {

/// Failure categories; the CLI maps each to a distinct exit code.
enum class ErrorCategory : int {
    configuration = 2,
    input = 3,
    contract = 4,
    numerical = 5,
    io = 6,
};

inline std::string to_string(ErrorCategory category) {
    switch (category) {
    case ErrorCategory::configuration: return "configuration";
    case ErrorCategory::input: return "input";
    case ErrorCategory::contract: return "contract";
    case ErrorCategory::numerical: return "numerical";
    case ErrorCategory::io: return "io";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }
    int exit_code() const noexcept { return static_cast<int>(category_); }

private:
    ErrorCategory category_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(ErrorCategory::configuration, what) {}
};

struct InputError : Error {
    explicit InputError(const std::string& what) : Error(ErrorCategory::input, what) {}
};

struct ContractError : Error {
    explicit ContractError(const std::string& what) : Error(ErrorCategory::contract, what) {}
};

struct NumericalError : Error {
    explicit NumericalError(const std::string& what) : Error(ErrorCategory::numerical, what) {}
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error(ErrorCategory::io, what) {}
};

} // namespace flyatom
