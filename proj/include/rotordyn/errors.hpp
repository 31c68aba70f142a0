#pragma once

#include <stdexcept>
#include <string>

namespace rotordyn {

/// Invalid input: bad model document, failed validation, bad run configuration.
class ModelError : public std::runtime_error {
public:
    explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: eigen iteration, singular dynamic stiffness, defective pairs.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rotordyn
