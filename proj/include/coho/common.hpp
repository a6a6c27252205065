#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>

namespace coho {

// Error taxonomy. `code` is a stable machine-checkable tag (e.g. "NotLatinSquare",
// "TruncationUnderflow"); `what()` carries the human diagnostic.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& msg)
      : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// Bad user-supplied input (CLI exit 2).
class InputError : public Error {
 public:
  using Error::Error;
};

// Configured resource ceiling exceeded (CLI exit 3).
class BudgetError : public Error {
 public:
  BudgetError(const std::string& msg) : Error("BudgetExceeded", msg) {}
};

// Broken internal invariant; indicates a bug, not bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace coho
