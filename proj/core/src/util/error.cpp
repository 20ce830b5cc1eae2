#include "forge/util/error.hpp"

namespace forge {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::WrongSpeaker: return "WrongSpeaker";
    case Errc::SchemaError: return "SchemaError";
    case Errc::ParseError: return "ParseError";
    case Errc::StructureError: return "StructureError";
    case Errc::PreconditionFailed: return "PreconditionFailed";
    case Errc::MissingScriptEntry: return "MissingScriptEntry";
    case Errc::BackendError: return "BackendError";
    case Errc::LengthNotMet: return "LengthNotMet";
    case Errc::RoleAbsent: return "RoleAbsent";
    case Errc::MissingPlaceholder: return "MissingPlaceholder";
    case Errc::RangeError: return "RangeError";
    case Errc::NotParsed: return "NotParsed";
    case Errc::InsufficientData: return "InsufficientData";
    case Errc::EmptySeries: return "EmptySeries";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::DegenerateVariance: return "DegenerateVariance";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::KeyMismatch: return "KeyMismatch";
    case Errc::ConfigError: return "ConfigError";
    case Errc::StageError: return "StageError";
    case Errc::DuplicateJudgment: return "DuplicateJudgment";
    case Errc::UnknownTask: return "UnknownTask";
    case Errc::Unauthorized: return "Unauthorized";
    case Errc::IoError: return "IoError";
    case Errc::Locked: return "Locked";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace forge
