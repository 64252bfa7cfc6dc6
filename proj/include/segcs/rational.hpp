#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>

#include "segcs/error.hpp"

namespace segcs {

/// Exact non-negative rational, always stored in lowest terms.
/// Extension rates live on the grid {0, 1/m_o, ..., 1} or on the integers,
/// so they are kept exact to make grid membership and argmax ties decidable.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  bool is_integer() const noexcept { return den_ == 1; }
  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  template <typename Scalar>
  Scalar as() const {
    return Scalar(num_) / Scalar(den_);
  }

  /// "3", "1/3", or a decimal such as "0.5" (converted exactly).
  static Rational parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return a.num_ * b.den_ <=> b.num_ * a.den_;
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace segcs
