#pragma once

#include <stdexcept>
#include <string>

namespace gtp {

/// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed user input: bad rationals, unknown labels, invalid documents.
class InputError : public Error {
  public:
    explicit InputError(const std::string& what) : Error(what) {}
};

/// A pricing/evasion operation was asked to work with an incoherent cone.
class IncoherentConeError : public Error {
  public:
    explicit IncoherentConeError(const std::string& what) : Error(what) {}
};

/// A move outside the trial's cone (or with negative coefficients).
class IllegalMoveError : public Error {
  public:
    explicit IllegalMoveError(const std::string& what) : Error(what) {}
};

/// An exhaustive walk or tree build would exceed the configured node budget.
class BudgetError : public Error {
  public:
    explicit BudgetError(const std::string& what) : Error(what) {}
};

/// An internal consistency check failed (e.g. strong duality violated).
/// Seeing this means a bug in the library, never bad user input.
class InternalError : public Error {
  public:
    explicit InternalError(const std::string& what) : Error(what) {}
};

}  // namespace gtp
