/*
 * (C) Copyright 2026 The patchdd authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace patchdd {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input: bad sizes, misaligned geometry, out-of-range parameters.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Mesh construction or mesh compatibility failure.
class MeshError : public Error {
public:
  using Error::Error;
};

/// A discrete operator violated an assumption (coercivity, monotonicity, SPD).
class AssemblyError : public Error {
public:
  using Error::Error;
};

/// Least-squares system is rank deficient or a leverage saturated.
class UnstableFitError : public Error {
public:
  using Error::Error;
};

/// Newton iteration did not reach the requested tolerance.
class NewtonDivergedError : public Error {
public:
  NewtonDivergedError(const std::string& what, double last_residual)
      : Error(what), last_residual_(last_residual) {}
  double last_residual() const noexcept { return last_residual_; }

private:
  double last_residual_;
};

/// File could not be read, written or parsed.
class IoError : public Error {
public:
  using Error::Error;
};

} // namespace patchdd
