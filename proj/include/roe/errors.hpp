#pragma once

#include <stdexcept>
#include <string>

namespace roe {

// Invalid SimConfig or RunConfig; message names the offending field.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Operation called on a state that cannot accept it (e.g. step on a
// terminal game).
class StateError : public std::runtime_error {
public:
    explicit StateError(const std::string& msg) : std::runtime_error(msg) {}
};

class ArgumentError : public std::runtime_error {
public:
    explicit ArgumentError(const std::string& msg) : std::runtime_error(msg) {}
};

// An episode log record is missing required structure (e.g. no phase
// keyword); message carries the record index.
class MalformedLogError : public std::runtime_error {
public:
    explicit MalformedLogError(const std::string& msg) : std::runtime_error(msg) {}
};

// A reflection document violated the standardized format; message names
// the violated rule.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Network / timeout / HTTP >= 400. Retryable.
class TransportError : public std::runtime_error {
public:
    explicit TransportError(const std::string& msg) : std::runtime_error(msg) {}
};

// Response arrived but could not be interpreted (bad JSON, missing fields).
class ProtocolError : public std::runtime_error {
public:
    explicit ProtocolError(const std::string& msg) : std::runtime_error(msg) {}
};

// Replay backend had no recorded response for the request.
class ReplayMissError : public std::runtime_error {
public:
    explicit ReplayMissError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace roe
