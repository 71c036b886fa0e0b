#pragma once

#include <stdexcept>
#include <string>

namespace conclab {

// Every failure mode the library reports. The C API maps these 1:1 onto
// status codes, so keep the list in sync with conclab.h.
enum class ErrorCode {
  invalid_argument,
  dimension_mismatch,
  parse,
  invalid_spec,
  not_positive,
  not_psd,
  not_isometry,
  inapplicable,
  negative_radicand,
  zero_spec,
  spec_not_sufficient,
  io,
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace conclab
