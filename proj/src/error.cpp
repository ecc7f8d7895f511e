#include "specnorm/error.hpp"

namespace specnorm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidConic: return "invalid-conic";
    case ErrorCode::SingularTransform: return "singular-transform";
    case ErrorCode::PointAtInfinity: return "point-at-infinity";
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::DegenerateGeometry: return "degenerate-geometry";
    case ErrorCode::OutOfDomain: return "out-of-domain";
    case ErrorCode::EmptyIsophote: return "empty isophote";
    case ErrorCode::NoSpecularity: return "no-specularity";
    case ErrorCode::SelectionFailed: return "selection-failed";
    case ErrorCode::InsufficientPoints: return "insufficient-points";
    case ErrorCode::DegenerateConfiguration: return "degenerate-configuration";
    case ErrorCode::NotAnEllipse: return "not-an-ellipse";
    case ErrorCode::NumericallyDegenerate: return "numerically-degenerate";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

}  // namespace specnorm
