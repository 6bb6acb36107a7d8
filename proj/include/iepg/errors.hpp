#pragma once

#include <stdexcept>
#include <string>

namespace iepg {

/// A numerical construction ran out of retry budget or failed a
/// post-condition check. The message carries the stage diagnostics.
struct ConstructionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A spectrum was rejected by a proved counting bound (for example, too few
/// distinct eigenvalues for the graph family). threshold is the required
/// number of distinct values.
struct InfeasibleError : std::runtime_error {
  InfeasibleError(const std::string& msg, int required_distinct)
      : std::runtime_error(msg), threshold(required_distinct) {}
  int threshold;
};

/// The solver found neither a realization route nor a proved obstruction;
/// the instance stays open as far as this library is concerned.
struct NotCertifiedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace iepg
