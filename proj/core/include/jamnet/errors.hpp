#pragma once

#include <stdexcept>
#include <string>

namespace jamnet {

// Iterative solver failed to reach its tolerance within the iteration cap.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file (bad JSON, missing/invalid fields).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Path enumeration exceeded its budget under the `error` overflow policy.
class PathOverflowError : public std::runtime_error {
public:
    explicit PathOverflowError(const std::string& what) : std::runtime_error(what) {}
};

// LP solver failure; message carries the phase and iteration trace.
class LpError : public std::runtime_error {
public:
    explicit LpError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace jamnet
