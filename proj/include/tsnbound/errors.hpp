#pragma once

#include <stdexcept>
#include <string>

namespace tsnb {

// Base class for everything thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid argument values: negative durations, bad sizes, broken invariants.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Malformed input documents (XML/JSON/quantities).
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

// Arrival rate reaches or exceeds service rate; the requested bound is unbounded.
class UnstableError : public Error {
public:
    explicit UnstableError(const std::string& msg) : Error(msg) {}
};

// Fixed-point iteration failed to settle on a finite bound.
class DivergenceError : public Error {
public:
    explicit DivergenceError(const std::string& msg) : Error(msg) {}
};

// File system failures.
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

} // namespace tsnb
