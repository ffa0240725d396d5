#pragma once

#include <stdexcept>
#include <string>

namespace dune {

/// Precondition or invariant violation on in-memory data.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input file (IDX dataset, model file).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration (unknown noise kind, bad flag combination).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dune
