#include "segcs/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace segcs {

void BoundQuery::validate() const {
  if (m_o < 1) throw Error(Errc::domain, "m_o must be >= 1");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw Error(Errc::domain, "gamma must be finite and >= 0");
  if (!(n >= 1.0)) throw Error(Errc::domain, "n must be >= 1");
  if (!(rd >= 0.0)) throw Error(Errc::domain, "R(D) must be >= 0");
  check_extension_rate(extension_case, m_o, alpha);
}

double capacity_ub(const BoundQuery& q) {
  q.validate();
  const double a = q.alpha.to_double();
  return q.extension_case == ExtensionCase::single_group ? capacity_ub_single_group(q.gamma, a, q.m_o)
                                                         : capacity_ub_multi_group(q.gamma, a, q.m_o);
}

double delta_lb(const BoundQuery& q) {
  q.validate();
  const double a = q.alpha.to_double();
  return q.extension_case == ExtensionCase::single_group ? delta_lb_single_group(q.rd, q.gamma, a, q.n)
                                                         : delta_lb_multi_group(q.rd, q.gamma, a, q.n);
}

double delta_o_lb(const BoundQuery& q) {
  q.validate();
  const double a = q.alpha.to_double();
  return q.extension_case == ExtensionCase::single_group ? delta_o_lb_single_group(q.rd, q.gamma, a, q.n)
                                                         : delta_o_lb_multi_group(q.rd, q.gamma, a, q.n);
}

BoundResult evaluate(const BoundQuery& q) {
  return {capacity_ub(q), delta_lb(q), delta_o_lb(q)};
}

MonotonicityReport monotonicity_multi_group(double gamma, int m_o) {
  detail::require_gamma(gamma, false);
  if (m_o < 2) throw Error(Errc::domain, "multi-group extension needs m_o >= 2");
  MonotonicityReport report;
  report.gamma = gamma;
  report.m_o = m_o;
  for (int a = 1; a <= m_o - 1; ++a) report.capacity.push_back(capacity_ub_multi_group(gamma, double(a), m_o));

  report.single_group_max = capacity_ub_single_group(gamma, 0.0, m_o);
  for (int k = 1; k <= m_o; ++k) {
    report.single_group_max = std::max(report.single_group_max, capacity_ub_single_group(gamma, double(k) / m_o, m_o));
  }

  // The two bounds coincide at alpha = 1; allow rounding there.
  const double slack = 1e-12 * std::max(1.0, std::fabs(report.single_group_max));
  report.non_decreasing = std::is_sorted(report.capacity.begin(), report.capacity.end());
  report.dominates_single_group = std::all_of(report.capacity.begin(), report.capacity.end(),
                                              [&](double c) { return c >= report.single_group_max - slack; });
  return report;
}

}  // namespace segcs
