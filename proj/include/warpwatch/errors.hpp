#pragma once

#include <stdexcept>
#include <string>

namespace warpwatch {

enum class ErrorKind {
  MalformedTimestamp,
  EndNotAfterStart,
  MissingHeader,
  InvalidEncoding,
  CueBeyondDuration,
  InvalidDuration,
  InvalidSpeed,
  InfeasibleTarget,
  OutOfRange,
  CueOutsidePlan,
  EmptyCorpus,
  EmptyTrack,
  DegenerateData,
  InvalidArgument,
  IoError,
};

const char* error_kind_name(ErrorKind kind);

/// Carries a kind for programmatic handling and, for parse errors, the
/// 1-based input line (0 when not applicable).
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string message, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                    : std::move(message)),
        kind_(kind),
        line_(line) {}

  ErrorKind kind() const { return kind_; }
  int line() const { return line_; }

private:
  ErrorKind kind_;
  int line_;
};

}  // namespace warpwatch
