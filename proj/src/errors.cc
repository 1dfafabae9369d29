#include "gamx/errors.h"

#include <string>

namespace gamx {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse: return "ParseError";
    case ErrorKind::kValidation: return "ValidationError";
    case ErrorKind::kDomain: return "DomainError";
    case ErrorKind::kBudgetExceeded: return "BudgetExceeded";
    case ErrorKind::kUnsupportedConfiguration: return "UnsupportedConfiguration";
    case ErrorKind::kUnsupportedDistribution: return "UnsupportedDistribution";
    case ErrorKind::kNoContrastiveReason: return "NoContrastiveReason";
    case ErrorKind::kStateSpaceTooLarge: return "StateSpaceTooLarge";
    case ErrorKind::kPrecision: return "PrecisionError";
    case ErrorKind::kOverflow: return "Overflow";
  }
  return "Error";
}

BudgetExceeded::BudgetExceeded(std::size_t pieces_reached, std::size_t budget)
    : Error(ErrorKind::kBudgetExceeded,
            "piecewise canonicalization reached " + std::to_string(pieces_reached) +
                " pieces, over the budget of " + std::to_string(budget) +
                "; discretize the domain or use the oracle"),
      pieces_reached_(pieces_reached),
      budget_(budget) {}

void Fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace gamx
