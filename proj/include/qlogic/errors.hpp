#pragma once

#include <stdexcept>
#include <string>

namespace qlogic {

enum class ErrorKind {
  // semitopology
  NotUnionClosed,
  MissingEmptySet,
  MissingFullSet,
  InvalidParams,
  // parsing / printing
  SyntaxError,
  UnknownSymbol,
  ArityMismatch,
  StrayFixVar,
  UnprintableKappa,
  UnknownValue,
  // semantics
  NotClosed,
  NotPositive,
  StabilizationFailure,
  // search / scenarios
  BudgetExceeded,
  InfeasibleParams,
  // catch-all for malformed inputs
  BadInput,
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotUnionClosed: return "NotUnionClosed";
    case ErrorKind::MissingEmptySet: return "MissingEmptySet";
    case ErrorKind::MissingFullSet: return "MissingFullSet";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownSymbol: return "UnknownSymbol";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::StrayFixVar: return "StrayFixVar";
    case ErrorKind::UnprintableKappa: return "UnprintableKappa";
    case ErrorKind::UnknownValue: return "UnknownValue";
    case ErrorKind::NotClosed: return "NotClosed";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::StabilizationFailure: return "StabilizationFailure";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::InfeasibleParams: return "InfeasibleParams";
    case ErrorKind::BadInput: return "BadInput";
  }
  return "Error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace qlogic
