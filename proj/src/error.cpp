#include "favlab/error.hpp"

namespace favlab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ContainmentViolation: return "ContainmentViolation";
    case ErrorKind::MixedShapes: return "MixedShapes";
    case ErrorKind::EmptySystem: return "EmptySystem";
    case ErrorKind::InvalidMap: return "InvalidMap";
    case ErrorKind::UnknownPreset: return "UnknownPreset";
    case ErrorKind::EnumerationCapExceeded: return "EnumerationCapExceeded";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DegenerateSeries: return "DegenerateSeries";
    case ErrorKind::SpecInvalid: return "SpecInvalid";
    case ErrorKind::ContourThroughZero: return "ContourThroughZero";
    case ErrorKind::PreconditionUnmet: return "PreconditionUnmet";
    case ErrorKind::DeltaOutOfRange: return "DeltaOutOfRange";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

void raise(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace favlab
