#pragma once

#include <stdexcept>
#include <string>

namespace precut {

enum class ErrorCode {
  kInvalidArgument = 1,
  kDegenerateInput = 2,
  kInsufficientData = 3,
  kNoFreeSpace = 4,
  kSingular = 5,
  kDomain = 6,
  kParse = 7,
  kNonFinite = 8,
  kIo = 9,
};

const char* error_code_name(ErrorCode code);

// All recoverable failures of the library are reported through this type.
// The C API maps `code()` onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace precut
