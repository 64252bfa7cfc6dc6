#pragma once

#include <stdexcept>
#include <string>

namespace segcs {

enum class Errc {
  invalid_sequence,
  dimension_mismatch,
  not_prime,
  alpha_out_of_range,
  cap_exceeded,
  divisibility,
  duplicate_sequence,
  wrong_case,
  domain,
  parse,
};

const char* to_string(Errc code) noexcept;

/// Exception thrown by every library operation; `code()` identifies the failure class.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace segcs
