#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ubf {

enum class ErrorCode {
  IoError,
  ParseError,
  ConfigError,
  InvalidParams,
  EmptyScene,
  OverlappingBlocks,
  DegenerateGeometry,
  EmptyIndex,
  PipelineOrderError,
  KTooLarge,
  InvalidHighLevelPoi,
  GridMismatch,
  OutOfExtent,
  UnknownIds,
  InvalidLayout,
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::EmptyScene: return "EmptyScene";
    case ErrorCode::OverlappingBlocks: return "OverlappingBlocks";
    case ErrorCode::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::EmptyIndex: return "EmptyIndex";
    case ErrorCode::PipelineOrderError: return "PipelineOrderError";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::InvalidHighLevelPoi: return "InvalidHighLevelPoi";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::OutOfExtent: return "OutOfExtent";
    case ErrorCode::UnknownIds: return "UnknownIds";
    case ErrorCode::InvalidLayout: return "InvalidLayout";
  }
  return "?";
}

// CLI exit-code buckets: 2 = config error, 3 = data error, 4 = pipeline error.
inline int default_exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidParams:
      return 2;
    case ErrorCode::IoError:
    case ErrorCode::ParseError:
    case ErrorCode::EmptyScene:
    case ErrorCode::OverlappingBlocks:
    case ErrorCode::UnknownIds:
    case ErrorCode::InvalidHighLevelPoi:
    case ErrorCode::InvalidLayout:
      return 3;
    case ErrorCode::DegenerateGeometry:
    case ErrorCode::EmptyIndex:
    case ErrorCode::PipelineOrderError:
    case ErrorCode::KTooLarge:
    case ErrorCode::GridMismatch:
    case ErrorCode::OutOfExtent:
      return 4;
  }
  return 4;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code), exit_code_(default_exit_code(code)) {}
  Error(ErrorCode code, const std::string& message, int exit_code)
      : std::runtime_error(message), code_(code), exit_code_(exit_code) {}

  ErrorCode code() const noexcept { return code_; }
  int exit_code() const noexcept { return exit_code_; }

 private:
  ErrorCode code_;
  int exit_code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace ubf
