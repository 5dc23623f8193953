#pragma once

#include <stdexcept>
#include <string>

namespace skiorder {

enum class ErrorCode {
  empty_input,
  length_mismatch,
  degenerate_matrix,
  numerical,
  knee_undefined,
  invalid_shape,
  geometry,
  config,
  diverged,
  parse,
  io,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so
// callers (the CLI, the ensemble runner) can map it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace skiorder
