#include "drmean/error.hpp"

namespace drm {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::DegenerateResponse: return "DegenerateResponse";
    case ErrorCode::SeparationSuspected: return "SeparationSuspected";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::ProbOutOfRange: return "ProbOutOfRange";
    case ErrorCode::SpanTooSmall: return "SpanTooSmall";
    case ErrorCode::EpsilonOutOfRange: return "EpsilonOutOfRange";
    case ErrorCode::KnotsNotIncreasing: return "KnotsNotIncreasing";
    case ErrorCode::TooFewUnits: return "TooFewUnits";
    case ErrorCode::NoRespondents: return "NoRespondents";
    case ErrorCode::MissingIntercept: return "MissingIntercept";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::EvaluationError: return "EvaluationError";
    case ErrorCode::EmptyFitGroup: return "EmptyFitGroup";
    case ErrorCode::MalformedCsv: return "MalformedCsv";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Error";
}

}  // namespace drm
