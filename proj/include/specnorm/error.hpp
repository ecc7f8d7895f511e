#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace specnorm {

enum class ErrorCode {
  InvalidConic,
  SingularTransform,
  PointAtInfinity,
  InvalidArgument,
  DegenerateGeometry,
  OutOfDomain,
  EmptyIsophote,
  NoSpecularity,
  SelectionFailed,
  InsufficientPoints,
  DegenerateConfiguration,
  NotAnEllipse,
  NumericallyDegenerate,
  Io,
};

/// Short stable identifier, used as the failure reason in trial records.
std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace specnorm
