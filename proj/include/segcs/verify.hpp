#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "segcs/rational.hpp"

namespace segcs {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Cyclic-grouping partition (m_o <= kEnumerationCap) and, for prime m_o,
/// congruence cross-correlation for every alpha, by exhaustive enumeration.
std::vector<CheckResult> verify_groups(int m_o);

/// Closed-form determinants and the V(k) spectrum against numeric factorizations
/// for every admissible alpha at the given m_o and each signal variance.
std::vector<CheckResult> verify_covariance(int m_o, std::span<const double> sigma_x2_values);

/// Capacity closed form against 1/2 log2 det(Sigma_Y) of the explicit matrix.
CheckResult verify_capacity(int m_o, const Rational& alpha, double gamma);

/// Relative tolerance of the determinant and capacity identities.
inline constexpr double kDeterminantTolerance = 1e-9;
/// Eigenvalue agreement and clustering tolerance.
inline constexpr double kEigenTolerance = 1e-8;

/// Prints an aligned table and returns true when every check passed.
bool print_report(std::ostream& out, std::span<const CheckResult> checks);

}  // namespace segcs
