#include "segcs/error.hpp"

namespace segcs {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_sequence: return "invalid sequence";
    case Errc::dimension_mismatch: return "dimension mismatch";
    case Errc::not_prime: return "not prime";
    case Errc::alpha_out_of_range: return "extension rate out of range";
    case Errc::cap_exceeded: return "size cap exceeded";
    case Errc::divisibility: return "n not divisible by m_o";
    case Errc::duplicate_sequence: return "duplicate sequence";
    case Errc::wrong_case: return "wrong extension case";
    case Errc::domain: return "domain error";
    case Errc::parse: return "parse error";
  }
  return "unknown";
}

}  // namespace segcs
