#pragma once

#include <stdexcept>
#include <string>

namespace blockade {

enum class ErrorCode {
  InvalidArgument = 1,
  SpaceMismatch,
  TruncationTooSmall,
  DimensionOverflow,
  SingularSystem,
  NotConverged,
  NotPositive,
  UndefinedObservable,
  IntegrationFailed,
  ConfigError,
  IoError,
};

const char* to_string(ErrorCode code);

// All library failures are reported through this exception; the C API maps
// code() onto its integer status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace blockade
