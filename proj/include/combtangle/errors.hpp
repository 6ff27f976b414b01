#pragma once

#include <stdexcept>
#include <string>

namespace combtangle {

/// Base of every error raised by the library. The C API maps each subclass
/// onto one status code (see combtangle.h).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed user input: scenario files, sweep specs, CLI values.
class SpecError : public Error {
 public:
  using Error::Error;
};

/// The requested analysis is not defined for the current drive regime
/// (above threshold, or detuned where resonance is required).
class UnsupportedRegimeError : public Error {
 public:
  using Error::Error;
};

/// Drift matrix has no stationary state (spectral abscissa >= 0).
class NoSteadyStateError : public Error {
 public:
  using Error::Error;
};

/// Time integration produced non-finite values.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, double time)
      : Error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Readout channel violates kappa_c >> g.
class AdiabaticityError : public Error {
 public:
  using Error::Error;
};

}  // namespace combtangle
