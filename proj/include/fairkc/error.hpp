#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fairkc {

enum class ErrorCode {
  InfeasibleQuota,
  BadGroupId,
  DuplicateC0,
  IndexOutOfRange,
  EmptyCenterSet,
  DisconnectedGraph,
  NotEnoughPoints,
  QuotaSumMismatch,
  WrongGroupCount,
  BudgetExceeded,
  ZeroOptimumPositiveCost,
  ConnectivityRetriesExhausted,
  BadParameters,
  BadDelta,
  FileNotFound,
  MalformedRow,
  MalformedInstance,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InfeasibleQuota: return "InfeasibleQuota";
    case ErrorCode::BadGroupId: return "BadGroupId";
    case ErrorCode::DuplicateC0: return "DuplicateC0";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::EmptyCenterSet: return "EmptyCenterSet";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::NotEnoughPoints: return "NotEnoughPoints";
    case ErrorCode::QuotaSumMismatch: return "QuotaSumMismatch";
    case ErrorCode::WrongGroupCount: return "WrongGroupCount";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::ZeroOptimumPositiveCost: return "ZeroOptimumPositiveCost";
    case ErrorCode::ConnectivityRetriesExhausted: return "ConnectivityRetriesExhausted";
    case ErrorCode::BadParameters: return "BadParameters";
    case ErrorCode::BadDelta: return "BadDelta";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::MalformedInstance: return "MalformedInstance";
  }
  return "Unknown";
}

// I/O failures map to exit code 2 in the CLI, everything else to 1.
constexpr bool is_io_error(ErrorCode code) noexcept {
  return code == ErrorCode::FileNotFound || code == ErrorCode::MalformedRow ||
         code == ErrorCode::MalformedInstance;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fairkc
