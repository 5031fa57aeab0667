#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace drm {

enum class ErrorCode {
  DimensionMismatch,
  RankDeficient,
  DegenerateResponse,
  SeparationSuspected,
  EmptyInput,
  ProbOutOfRange,
  SpanTooSmall,
  EpsilonOutOfRange,
  KnotsNotIncreasing,
  TooFewUnits,
  NoRespondents,
  MissingIntercept,
  InvalidArgument,
  SyntaxError,
  UnknownVariable,
  EvaluationError,
  EmptyFitGroup,
  MalformedCsv,
  ConfigError,
};

std::string_view to_string(ErrorCode code) noexcept;

// All library failures surface as drm::Error; the code lets callers (the
// simulation runner, the CLI) decide between containment and abort.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace drm
