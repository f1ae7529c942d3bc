#pragma once

#include <stdexcept>
#include <string>

namespace rdst {

/// Thrown when an adaptive numeric scheme exhausts its budget or produces
/// non-finite values. The message carries the achieved estimate.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a problem configuration is outside what a solver supports
/// (as opposed to a numeric failure on a supported configuration).
class spec_error : public std::runtime_error {
public:
    explicit spec_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace rdst
