#ifndef GAMX_ERRORS_H_
#define GAMX_ERRORS_H_

#include <stdexcept>
#include <string>

namespace gamx {

enum class ErrorKind {
  kParse,
  kValidation,
  kDomain,
  kBudgetExceeded,
  kUnsupportedConfiguration,
  kUnsupportedDistribution,
  kNoContrastiveReason,
  kStateSpaceTooLarge,
  kPrecision,
  kOverflow,
};

const char* ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised by MLP canonicalization when the piece count passes the budget.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::size_t pieces_reached, std::size_t budget);

  std::size_t pieces_reached() const { return pieces_reached_; }
  std::size_t budget() const { return budget_; }

 private:
  std::size_t pieces_reached_;
  std::size_t budget_;
};

[[noreturn]] void Fail(ErrorKind kind, const std::string& message);

}  // namespace gamx

#endif  // GAMX_ERRORS_H_
