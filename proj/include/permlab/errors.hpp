#pragma once

#include <stdexcept>
#include <string>

namespace permlab {

/// Raised when an operation would exceed its configured work budget
/// (e.g. too many permanent summands). Callers can retry with a larger
/// budget or a cheaper algorithm.
class budget_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised on malformed input files; the message carries the location.
class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace permlab
