#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace moment_bounds {

/// Base class for every failure raised by the library. `module()` names the
/// component that detected the problem so that the CLI can attribute it.
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& what)
        : std::runtime_error(what), module_(std::move(module)) {}

    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

/// Malformed text input; `line()` is 1-based, 0 when not applicable.
class ParseError : public Error {
public:
    ParseError(std::string module, const std::string& what, std::size_t line = 0)
        : Error(std::move(module), line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Input that parses but violates a structural contract (self-loop, bad index, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Numerically degenerate or out-of-domain input (edgeless graph, infeasible moments, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// An internal identity failed to hold. Always indicates a bug.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace moment_bounds
