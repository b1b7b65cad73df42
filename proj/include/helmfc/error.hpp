#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace helmfc {

enum class ErrorKind {
  Io,
  Parse,
  UnknownLabel,
  DuplicateId,
  AtlasMismatch,
  NonFinite,
  TooShort,
  ZeroVariance,
  InvalidArgument,
  DimensionMismatch,
  NotTrained,
  NotNormalized,
  Numerical,
  Config,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library. `kind` lets callers and tests branch
/// without matching message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace helmfc
