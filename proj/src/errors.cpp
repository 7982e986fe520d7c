#include "warpwatch/errors.hpp"

namespace warpwatch {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedTimestamp: return "MalformedTimestamp";
    case ErrorKind::EndNotAfterStart: return "EndNotAfterStart";
    case ErrorKind::MissingHeader: return "MissingHeader";
    case ErrorKind::InvalidEncoding: return "InvalidEncoding";
    case ErrorKind::CueBeyondDuration: return "CueBeyondDuration";
    case ErrorKind::InvalidDuration: return "InvalidDuration";
    case ErrorKind::InvalidSpeed: return "InvalidSpeed";
    case ErrorKind::InfeasibleTarget: return "InfeasibleTarget";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::CueOutsidePlan: return "CueOutsidePlan";
    case ErrorKind::EmptyCorpus: return "EmptyCorpus";
    case ErrorKind::EmptyTrack: return "EmptyTrack";
    case ErrorKind::DegenerateData: return "DegenerateData";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace warpwatch
