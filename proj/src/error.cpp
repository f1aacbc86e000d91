#include "modtop/error.hpp"

namespace modtop {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidExponent: return "InvalidExponent";
    case ErrorCode::IncompatibleTail: return "IncompatibleTail";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::NotInModularSpace: return "NotInModularSpace";
    case ErrorCode::NormUncertain: return "NormUncertain";
    case ErrorCode::UndeclaredGrowth: return "UndeclaredGrowth";
    case ErrorCode::NotUnbounded: return "NotUnbounded";
    case ErrorCode::SearchCapExceeded: return "SearchCapExceeded";
    case ErrorCode::NotFiniteModular: return "NotFiniteModular";
    case ErrorCode::UnknownScenario: return "UnknownScenario";
    case ErrorCode::ExponentBelowTwo: return "ExponentBelowTwo";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace modtop
