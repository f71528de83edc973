#include "nullcontact/error.hpp"

namespace nc {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::Budget: return "Budget";
    case ErrorCode::Stiff: return "Stiff";
    case ErrorCode::NoBracket: return "NoBracket";
    case ErrorCode::NotNull: return "NotNull";
    case ErrorCode::NotFuture: return "NotFuture";
    case ErrorCode::BadProfile: return "BadProfile";
    case ErrorCode::OutsideDomain: return "OutsideDomain";
    case ErrorCode::NotOnBoundary: return "NotOnBoundary";
    case ErrorCode::DegenerateGradient: return "DegenerateGradient";
    case ErrorCode::LostSurface: return "LostSurface";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::Mismatch: return "MismatchDiagnostic";
    case ErrorCode::NotTransverse: return "NotTransverse";
    case ErrorCode::InconsistentHolonomy: return "InconsistentHolonomy";
    case ErrorCode::NotMonotone: return "NotMonotone";
    case ErrorCode::NotSupported: return "NotSupported";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace nc
