#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fiid {

enum class ErrorCode {
  InvalidArgument,
  LoopEdge,
  DuplicateEdge,
  VertexOutOfRange,
  ParityError,
  RetryBudgetExceeded,
  UnknownName,
  InducedCycle,
  TooLarge,
  BudgetExceeded,
  MalformedBall,
  IncompleteTable,
  InvalidDistribution,
  InconsistentMarginals,
  DegreeMismatch,
  ParseError,
};

inline std::string_view to_string(ErrorCode code)
{
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::LoopEdge: return "LoopEdge";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::VertexOutOfRange: return "VertexOutOfRange";
    case ErrorCode::ParityError: return "ParityError";
    case ErrorCode::RetryBudgetExceeded: return "RetryBudgetExceeded";
    case ErrorCode::UnknownName: return "UnknownName";
    case ErrorCode::InducedCycle: return "InducedCycle";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::MalformedBall: return "MalformedBall";
    case ErrorCode::IncompleteTable: return "IncompleteTable";
    case ErrorCode::InvalidDistribution: return "InvalidDistribution";
    case ErrorCode::InconsistentMarginals: return "InconsistentMarginals";
    case ErrorCode::DegreeMismatch: return "DegreeMismatch";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
  {
  }

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by induced_two_coloring; `cycle` lists the vertices of an induced
/// cycle in traversal order.
class InducedCycleError : public Error {
 public:
  explicit InducedCycleError(std::vector<int> cycle)
      : Error(ErrorCode::InducedCycle, "induced subgraph contains a cycle of length " +
                                           std::to_string(cycle.size())),
        cycle_(std::move(cycle))
  {
  }

  const std::vector<int>& cycle() const noexcept { return cycle_; }

 private:
  std::vector<int> cycle_;
};

}  // namespace fiid
