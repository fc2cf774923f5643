#pragma once

#include <stdexcept>

namespace qsl {

/// Base class of every error thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent configuration (bad parameters, schema violations).
struct ConfigError : Error {
  using Error::Error;
};

/// A numerical gate failed (step-size estimate, cross-check mismatch).
struct NumericsError : Error {
  using Error::Error;
};

/// A physical invariant was violated (state left the Bloch ball, map became
/// nonphysical, integration diverged).
struct PhysicsError : Error {
  using Error::Error;
};

}  // namespace qsl
