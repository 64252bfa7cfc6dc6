#pragma once

#include <cmath>
#include <vector>

#include "segcs/covariance.hpp"
#include "segcs/error.hpp"
#include "segcs/rational.hpp"

namespace segcs {

// All information quantities are in bits (log base 2).

namespace detail {

template <typename Scalar>
void require_gamma(Scalar gamma, bool strictly_positive) {
  if (!std::isfinite(static_cast<double>(gamma)) || gamma < Scalar(0) || (strictly_positive && gamma == Scalar(0))) {
    throw Error(Errc::domain, strictly_positive ? "gamma must be > 0" : "gamma must be >= 0");
  }
}

template <typename Scalar>
void require_rate_inputs(Scalar rd, Scalar n) {
  if (!(rd >= Scalar(0))) throw Error(Errc::domain, "R(D) must be >= 0");
  if (!(n >= Scalar(1))) throw Error(Errc::domain, "n must be >= 1");
}

}  // namespace detail

/// Uncorrelated-sample bound m * 1/2 log2(1 + gamma - mu_w^2).
template <typename Scalar>
Scalar baseline_capacity_ub(Scalar gamma, Scalar mu_w, long m) {
  const Scalar arg = Scalar(1) + gamma - mu_w * mu_w;
  if (!(arg > Scalar(0))) throw Error(Errc::domain, "1 + gamma - mu_w^2 must be > 0");
  if (m < 0) throw Error(Errc::domain, "m must be >= 0");
  using std::log2;
  return Scalar(m) * log2(arg) / Scalar(2);
}

/// Single-group penalty 1/2 log2(1 - (gamma/(gamma+1))^2 alpha); never positive.
template <typename Scalar>
Scalar single_group_penalty(Scalar gamma, Scalar alpha) {
  using std::log2;
  const Scalar beta = gamma / (gamma + Scalar(1));
  return log2(Scalar(1) - beta * beta * alpha) / Scalar(2);
}

/// Multi-group penalty (alpha+1)/2 log2(gamma+1) - 1/2 log2((1+alpha) gamma + 1); never negative.
template <typename Scalar>
Scalar multi_group_penalty(Scalar gamma, Scalar alpha) {
  using std::log2;
  return (alpha + Scalar(1)) / Scalar(2) * log2(gamma + Scalar(1)) -
         log2((Scalar(1) + alpha) * gamma + Scalar(1)) / Scalar(2);
}

/// Capacity upper bound with m = (1+alpha) m_o samples, alpha any real in [0, 1].
template <typename Scalar>
Scalar capacity_ub_single_group(Scalar gamma, Scalar alpha, int m_o) {
  detail::require_gamma(gamma, false);
  if (!(alpha >= Scalar(0) && alpha <= Scalar(1))) throw Error(Errc::alpha_out_of_range, "alpha must lie in [0, 1]");
  using std::log2;
  const Scalar m = (Scalar(1) + alpha) * Scalar(m_o);
  return m / Scalar(2) * log2(gamma + Scalar(1)) + single_group_penalty(gamma, alpha);
}

/// Capacity upper bound with m = (1+alpha) m_o samples, alpha >= 1.
template <typename Scalar>
Scalar capacity_ub_multi_group(Scalar gamma, Scalar alpha, int m_o) {
  detail::require_gamma(gamma, false);
  if (!(alpha >= Scalar(1))) throw Error(Errc::alpha_out_of_range, "alpha must be >= 1");
  using std::log2;
  const Scalar m = (Scalar(1) + alpha) * Scalar(m_o);
  return m / Scalar(2) * log2(gamma + Scalar(1)) - multi_group_penalty(gamma, alpha);
}

/// 2 R(D) / log2(gamma + 1): the sampling-rate bound for uncorrelated samples.
template <typename Scalar>
Scalar delta_lb_baseline(Scalar rd, Scalar gamma) {
  detail::require_gamma(gamma, true);
  using std::log2;
  return Scalar(2) * rd / log2(gamma + Scalar(1));
}

template <typename Scalar>
Scalar delta_lb_single_group(Scalar rd, Scalar gamma, Scalar alpha, Scalar n) {
  detail::require_gamma(gamma, true);
  detail::require_rate_inputs(rd, n);
  if (!(alpha >= Scalar(0) && alpha <= Scalar(1))) throw Error(Errc::alpha_out_of_range, "alpha must lie in [0, 1]");
  using std::log2;
  const Scalar lg = log2(gamma + Scalar(1));
  return delta_lb_baseline(rd, gamma) - Scalar(2) * single_group_penalty(gamma, alpha) / (n * lg);
}

template <typename Scalar>
Scalar delta_lb_multi_group(Scalar rd, Scalar gamma, Scalar alpha, Scalar n) {
  detail::require_gamma(gamma, true);
  detail::require_rate_inputs(rd, n);
  if (!(alpha >= Scalar(1))) throw Error(Errc::alpha_out_of_range, "alpha must be >= 1");
  using std::log2;
  const Scalar lg = log2(gamma + Scalar(1));
  return delta_lb_baseline(rd, gamma) + (alpha + Scalar(1)) / n -
         log2((Scalar(1) + alpha) * gamma + Scalar(1)) / (n * lg);
}

/// Original-rate bound delta_o >= delta_lb / (1 + alpha).
template <typename Scalar>
Scalar delta_o_lb_single_group(Scalar rd, Scalar gamma, Scalar alpha, Scalar n) {
  return delta_lb_single_group(rd, gamma, alpha, n) / (Scalar(1) + alpha);
}

/// (2R/L - log2((1+alpha) gamma + 1)/(n L)) / (1 + alpha) + 1/n, with L = log2(gamma + 1).
template <typename Scalar>
Scalar delta_o_lb_multi_group(Scalar rd, Scalar gamma, Scalar alpha, Scalar n) {
  detail::require_gamma(gamma, true);
  detail::require_rate_inputs(rd, n);
  if (!(alpha >= Scalar(1))) throw Error(Errc::alpha_out_of_range, "alpha must be >= 1");
  using std::log2;
  const Scalar lg = log2(gamma + Scalar(1));
  return (delta_lb_baseline(rd, gamma) - log2((Scalar(1) + alpha) * gamma + Scalar(1)) / (n * lg)) /
             (Scalar(1) + alpha) +
         Scalar(1) / n;
}

/// n -> infinity form of the original-rate bound, shared by both cases.
template <typename Scalar>
Scalar delta_o_lb_limit(Scalar rd, Scalar gamma, Scalar alpha) {
  return delta_lb_baseline(rd, gamma) / (Scalar(1) + alpha);
}

/// (s/n) log2(n/s) bits per symbol for an s-sparse signal.
template <typename Scalar>
Scalar rate_distortion_sparse(Scalar sparsity_ratio) {
  if (!(sparsity_ratio > Scalar(0) && sparsity_ratio < Scalar(1))) {
    throw Error(Errc::domain, "sparsity ratio must lie in (0, 1)");
  }
  using std::log2;
  return -sparsity_ratio * log2(sparsity_ratio);
}

template <typename Scalar>
struct OptimalAlpha {
  Rational discrete;        ///< argmax of the capacity bound over {0, 1/m_o, ..., 1}
  Scalar continuous;        ///< maximizer over the interval [0, 1]
  Scalar stationary_point;  ///< unclamped root of the derivative
};

/// Optimal single-group extension rate.
///
/// The capacity bound f(alpha) is concave on [0, 1] with f'(0) > 0, so the
/// continuous maximizer is the root (gamma+1)^2/gamma^2 - 1/(m_o ln(gamma+1))
/// of f' clamped to 1. The discrete value is found by evaluating every grid point.
template <typename Scalar>
OptimalAlpha<Scalar> optimal_alpha_single_group(Scalar gamma, int m_o) {
  detail::require_gamma(gamma, true);
  if (m_o < 1) throw Error(Errc::domain, "m_o must be >= 1");
  using std::log;
  const Scalar ratio = (gamma + Scalar(1)) / gamma;
  const Scalar stationary = ratio * ratio - Scalar(1) / (Scalar(m_o) * log(gamma + Scalar(1)));

  Rational best(0);
  Scalar best_value = capacity_ub_single_group(gamma, Scalar(0), m_o);
  for (int k = 1; k <= m_o; ++k) {
    const Rational a(k, m_o);
    const Scalar value = capacity_ub_single_group(gamma, a.as<Scalar>(), m_o);
    if (value > best_value) {
      best_value = value;
      best = a;
    }
  }
  return {best, std::min(stationary, Scalar(1)), stationary};
}

struct BoundQuery {
  double gamma = 0.0;
  Rational alpha;
  int m_o = 1;
  double n = 1.0;
  double rd = 0.0;
  ExtensionCase extension_case = ExtensionCase::single_group;

  /// Throws Errc::domain or Errc::alpha_out_of_range.
  void validate() const;
};

struct BoundResult {
  double capacity_ub = 0.0;
  double delta_lb = 0.0;
  double delta_o_lb = 0.0;
};

double capacity_ub(const BoundQuery& q);
double delta_lb(const BoundQuery& q);
double delta_o_lb(const BoundQuery& q);
BoundResult evaluate(const BoundQuery& q);

struct MonotonicityReport {
  double gamma = 0.0;
  int m_o = 0;
  std::vector<double> capacity;  ///< multi-group bound at alpha = 1 .. m_o-1
  double single_group_max = 0.0;  ///< largest single-group bound over its grid
  bool non_decreasing = false;
  bool dominates_single_group = false;
  bool passed() const noexcept { return non_decreasing && dominates_single_group; }
};

/// Checks that the multi-group bound never decreases in alpha and never falls
/// below the best single-group bound.
MonotonicityReport monotonicity_multi_group(double gamma, int m_o);

}  // namespace segcs
