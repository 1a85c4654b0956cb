#include "berezin/error.hpp"

namespace berezin {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::OutsideOpenCell: return "OutsideOpenCell";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::DegeneratePlane: return "DegeneratePlane";
    case ErrorCode::InvalidLabel: return "InvalidLabel";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::CorruptedEntry: return "CorruptedEntry";
    case ErrorCode::SingularExponent: return "SingularExponent";
    case ErrorCode::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorCode::KernelSingular: return "KernelSingular";
    case ErrorCode::MissingConfig: return "MissingConfig";
    case ErrorCode::NoWitnessFound: return "NoWitnessFound";
    case ErrorCode::InconclusiveScan: return "InconclusiveScan";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::DivergentWeight: return "DivergentWeight";
    case ErrorCode::LambdaOutOfRange: return "LambdaOutOfRange";
    case ErrorCode::SupportViolation: return "SupportViolation";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace berezin
