#include "helmfc/error.hpp"

namespace helmfc {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io: return "io";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::UnknownLabel: return "unknown-label";
    case ErrorKind::DuplicateId: return "duplicate-id";
    case ErrorKind::AtlasMismatch: return "atlas-mismatch";
    case ErrorKind::NonFinite: return "non-finite";
    case ErrorKind::TooShort: return "too-short";
    case ErrorKind::ZeroVariance: return "zero-variance";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::NotTrained: return "not-trained";
    case ErrorKind::NotNormalized: return "not-normalized";
    case ErrorKind::Numerical: return "numerical";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

}  // namespace helmfc
