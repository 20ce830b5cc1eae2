#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace forge {

enum class Errc {
  InvalidArgument,
  IndexOutOfRange,
  WrongSpeaker,
  SchemaError,
  ParseError,
  StructureError,
  PreconditionFailed,
  MissingScriptEntry,
  BackendError,
  LengthNotMet,
  RoleAbsent,
  MissingPlaceholder,
  RangeError,
  NotParsed,
  InsufficientData,
  EmptySeries,
  ZeroVariance,
  DegenerateVariance,
  EmptyInput,
  KeyMismatch,
  ConfigError,
  StageError,
  DuplicateJudgment,
  UnknownTask,
  Unauthorized,
  IoError,
  Locked,
};

std::string_view to_string(Errc code);

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI's exit-code mapping) can branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace forge
