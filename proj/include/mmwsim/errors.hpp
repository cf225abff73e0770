#pragma once

#include <stdexcept>
#include <string>

namespace mmwsim {

/// Invalid configuration (bad parameter values, malformed scenario files).
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A runtime invariant of the simulation was violated.  Indicates a bug or
/// an internally inconsistent state, not a user error.
class InvariantError : public std::logic_error {
  public:
    explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

/// Filesystem trouble: unreadable input, unwritable output.
class IoError : public std::runtime_error {
  public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mmwsim
