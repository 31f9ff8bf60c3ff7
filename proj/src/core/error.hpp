#pragma once

#include <stdexcept>
#include <string>

namespace cswp {

enum class ErrorCode {
  InvalidArgument,
  Parse,
  InvalidProgram,
  Domain,
  BudgetExceeded,
  RankDeficient,
};

// All library failures are reported as Error; the C API maps code() onto
// its status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cswp
