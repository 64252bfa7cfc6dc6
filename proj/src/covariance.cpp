#include "segcs/covariance.hpp"

namespace segcs {

const char* to_string(ExtensionCase c) noexcept {
  return c == ExtensionCase::single_group ? "single" : "multi";
}

void check_extension_rate(ExtensionCase c, int m_o, const Rational& alpha) {
  if (c == ExtensionCase::single_group) {
    if (alpha < Rational(0) || alpha > Rational(1) || !(alpha * Rational(m_o)).is_integer()) {
      throw Error(Errc::alpha_out_of_range,
                  "single-group extension needs alpha in {0, 1/m_o, ..., 1} (m_e <= m_o rows of one group); got " +
                      alpha.to_string() + " with m_o = " + std::to_string(m_o));
    }
    return;
  }
  if (!alpha.is_integer() || alpha < Rational(1) || alpha > Rational(m_o - 1)) {
    throw Error(Errc::alpha_out_of_range,
                "multi-group extension needs an integer alpha in 1..m_o-1 (all rows of alpha groups); got " +
                    alpha.to_string() + " with m_o = " + std::to_string(m_o));
  }
}

}  // namespace segcs
