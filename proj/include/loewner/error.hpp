#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace loewner {

enum class ErrorCode {
  DimensionMismatch,
  NonConvergence,
  NotPSD,
  Singular,
  DomainError,
  OutOfInterval,
  NotComparable,
  PreconditionViolated,
  BadParameter,
  NotDiagonal,
  NotAnEffect,
  InternalInversionFailure,
  NotAutomorphism,
  InvalidSpec,
  OutOfDomain,
  IntermediateSingular,
  NotIsomorphic,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so the C
// layer can translate it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace loewner
