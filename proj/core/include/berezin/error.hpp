#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace berezin {

enum class ErrorCode {
  OutsideOpenCell,
  ShapeMismatch,
  DegeneratePlane,
  InvalidLabel,
  UnknownKey,
  CorruptedEntry,
  SingularExponent,
  UnsupportedFamily,
  KernelSingular,
  MissingConfig,
  NoWitnessFound,
  InconclusiveScan,
  NotPositive,
  DivergentWeight,
  LambdaOutOfRange,
  SupportViolation,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every library failure is reported as a berezin::Error carrying a code the
/// CLI maps onto exit statuses and report fields.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace berezin
