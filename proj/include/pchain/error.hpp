#pragma once

#include <stdexcept>
#include <string>

namespace pchain {

enum class ErrorKind {
  CompositionNonzero,
  DimensionMismatch,
  NotASubmodule,
  RingMismatch,
  UnboundedChains,
  GroupTooLarge,
  BaseMismatch,
  NotAFunctor,
  VarianceMismatch,
  NotLeftFree,
  ComparisonFailed,
  NotTwoColumn,
  FamilyMismatch,
  LiftFailed,
  ParseError,
  ValidationError,
  InvalidArgument,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
  Error(ErrorKind k, const std::string& msg)
      : std::runtime_error(std::string(error_kind_name(k)) + ": " + msg), kind_(k) {}
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& msg) { throw Error(k, msg); }

} // namespace pchain
