#pragma once

#include <stdexcept>
#include <string>

namespace xwigner {

// Invalid physical/run configuration. Maps to CLI exit code 2.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure: quadrature truncation, degenerate overlap,
// insufficient tomographic coverage. Maps to CLI exit code 3.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// File I/O failure. Maps to CLI exit code 4.
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace xwigner
