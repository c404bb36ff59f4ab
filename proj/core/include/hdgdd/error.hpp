#pragma once

#include <stdexcept>
#include <string>

namespace hdgdd {

/// Invalid geometry or topology (degenerate elements, bad adjacency, bad tags).
class MeshError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid numerical input: unsupported quadrature order, bad parameters.
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Singular local/global systems, non-converged iterations, failed solves.
class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Configuration parse/validation failures (CLI exit code 1).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace hdgdd
