#pragma once

#include <stdexcept>
#include <string>

namespace sforge {

// Configuration / input problems (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failures: step-size collapse, quadrature non-convergence,
// integration blow-up (CLI exit code 3).
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// A parameter regime the solution family does not cover.
class UnsupportedRegimeError : public std::runtime_error {
public:
  explicit UnsupportedRegimeError(const std::string& what) : std::runtime_error(what) {}
};

// Zero of the characteristic function mu(t): the 1/sqrt(mu) amplitude factor
// diverges and the solution's validity interval ends.
class FocalPointError : public std::runtime_error {
public:
  FocalPointError(const std::string& what, double t)
      : std::runtime_error(what), time(t) {}
  double time;
};

// Simple pole hit at an evaluation point (kernels at t=0, resonance field B0).
class PoleError : public std::runtime_error {
public:
  PoleError(const std::string& what, double where)
      : std::runtime_error(what), location(where) {}
  double location;
};

// A diagnostic check could not be carried out reliably (e.g. sampling grid
// too coarse for the requested finite-difference order).
class DiagnosticsError : public std::runtime_error {
public:
  explicit DiagnosticsError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sforge
