#pragma once

#include <stdexcept>
#include <string>

namespace tindex {

// Malformed gluing-data input; carries a human-readable location.
class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

// rank(A|B) differs from the expected number of rows.
class RankError : public std::runtime_error {
public:
    explicit RankError(const std::string& what) : std::runtime_error(what) {}
};

// Row action matrix is not unimodular.
class UnimodularError : public std::runtime_error {
public:
    explicit UnimodularError(const std::string& what) : std::runtime_error(what) {}
};

// A 3-2 move site does not match the internal-edge pattern, or the free
// variable fails to cancel.
class PatternError : public std::runtime_error {
public:
    explicit PatternError(const std::string& what) : std::runtime_error(what) {}
};

// Bivariate series access outside the stored x-window.
class WindowError : public std::out_of_range {
public:
    explicit WindowError(const std::string& what) : std::out_of_range(what) {}
};

} // namespace tindex
