#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pivot {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Pitch too close to +-pi/2 for the Euler-rate map to be invertible.
struct SingularConfiguration : Error {
  using Error::Error;
};

struct NonPositiveInput : Error {
  using Error::Error;
};

struct NegativeMass : Error {
  using Error::Error;
};

/// An operation that needs a single-support pivot was called in another phase.
struct NoPivot : Error {
  using Error::Error;
};

struct RankDeficient : Error {
  using Error::Error;
};

struct InvalidParams : Error {
  using Error::Error;
};

struct WrongPathLength : Error {
  using Error::Error;
};

struct NoAdmissiblePath : Error {
  using Error::Error;
};

struct SingularDamping : Error {
  using Error::Error;
};

struct ContactLost : Error {
  using Error::Error;
};

/// A swing vertex hit the ground outside a touchdown window.
struct ScuffDetected : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

/// Carries every violated invariant found while validating a configuration.
struct ValidationError : Error {
  ValidationError(const std::string& what, std::vector<std::string> issues_in)
      : Error(what), issues(std::move(issues_in)) {}
  std::vector<std::string> issues;
};

}  // namespace pivot
