#pragma once

#include <stdexcept>
#include <string>

namespace pclass {

enum class ErrorCode {
  invalid_input,
  domain,
  negative_spectrum,
  hypothesis,
  degenerate,
  search_failure,
  parse,
  unknown_check,
  unsatisfiable,
};

const char* to_string(ErrorCode code) noexcept;

/// Single exception type for the library; the code selects the C API status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace pclass
