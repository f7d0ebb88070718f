#include "loewner/error.hpp"

namespace loewner {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::OutOfInterval: return "OutOfInterval";
    case ErrorCode::NotComparable: return "NotComparable";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::NotDiagonal: return "NotDiagonal";
    case ErrorCode::NotAnEffect: return "NotAnEffect";
    case ErrorCode::InternalInversionFailure: return "InternalInversionFailure";
    case ErrorCode::NotAutomorphism: return "NotAutomorphism";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::IntermediateSingular: return "IntermediateSingular";
    case ErrorCode::NotIsomorphic: return "NotIsomorphic";
  }
  return "Unknown";
}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace loewner
