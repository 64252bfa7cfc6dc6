#include "segcs/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include "segcs/bounds.hpp"
#include "segcs/covariance.hpp"
#include "segcs/error.hpp"
#include "segcs/oracle.hpp"
#include "segcs/permgroup.hpp"
#include "segcs/sampler.hpp"

namespace segcs {

namespace {

double rel_err(long double value, long double reference) {
  const long double scale = std::max(std::fabs(value), std::fabs(reference));
  return scale == 0 ? 0.0 : static_cast<double>(std::fabs(value - reference) / scale);
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(3) << v;
  return s.str();
}

std::vector<std::vector<int>> as_rows(std::span<const PermutationSequence> seqs) {
  std::vector<std::vector<int>> rows;
  for (const auto& s : seqs) rows.emplace_back(s.elements().begin(), s.elements().end());
  return rows;
}

long long factorial(int k) {
  long long f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Sigma_W is PSD, so the smallest eigenvalue of Sigma_Y = Sigma_W + I is at least 1.
bool definite(const CovarianceModel<long double>& model) {
  const double tol = 1e-10 * (static_cast<double>(model.sigma_x2()) + 1.0);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> w(build_sigma_w(model).values.cast<double>(), Eigen::EigenvaluesOnly);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> y(build_sigma_y(model).values.cast<double>(), Eigen::EigenvaluesOnly);
  return w.eigenvalues().minCoeff() >= -tol && y.eigenvalues().minCoeff() >= 1.0 - tol;
}

}  // namespace

std::vector<CheckResult> verify_groups(int m_o) {
  std::vector<CheckResult> out;
  const std::string tag = "m_o=" + std::to_string(m_o);

  if (m_o <= kEnumerationCap) {
    const auto groups = cyclic_grouping(m_o);
    bool sizes = groups.size() == static_cast<std::size_t>(factorial(m_o - 1));
    bool uncorrelated = true;
    std::set<std::vector<int>> seen;
    std::size_t total = 0;
    for (const auto& g : groups) {
      sizes = sizes && g.members.size() == static_cast<std::size_t>(m_o);
      for (std::size_t a = 0; a < g.members.size(); ++a) {
        seen.emplace(g.members[a].elements().begin(), g.members[a].elements().end());
        ++total;
        for (std::size_t b = a + 1; b < g.members.size(); ++b) {
          uncorrelated = uncorrelated && oracle::positional_matches(g.members[a].elements(), g.members[b].elements()) == 0;
        }
      }
    }
    const auto all = oracle::all_permutations(m_o);
    const bool cover = total == all.size() && seen == std::set<std::vector<int>>(all.begin(), all.end());
    out.push_back({"cyclic grouping partition " + tag, sizes && uncorrelated && cover,
                   std::to_string(groups.size()) + " groups, " + std::to_string(total) + " sequences"});
  } else {
    const auto g = cyclic_shift_group(PermutationSequence::identity(m_o));
    bool uncorrelated = true;
    for (std::size_t a = 0; a < g.members.size(); ++a)
      for (std::size_t b = a + 1; b < g.members.size(); ++b)
        uncorrelated = uncorrelated && oracle::positional_matches(g.members[a].elements(), g.members[b].elements()) == 0;
    out.push_back({"cyclic shift group " + tag, uncorrelated, "full grouping above enumeration cap"});
  }

  if (!is_prime(m_o)) {
    bool rejected = false;
    try {
      (void)congruence_groups(m_o, 1);
    } catch (const Error& e) {
      rejected = e.code() == Errc::not_prime;
    }
    out.push_back({"congruence groups reject composite " + tag, rejected, ""});
    return out;
  }

  for (int alpha = 1; alpha <= m_o - 1; ++alpha) {
    const auto family = congruence_groups(m_o, alpha);
    long pairs = 0;
    bool exact_one = true;
    bool within_zero = true;
    bool originals_one = true;
    std::set<PermutationSequence> distinct;
    for (std::size_t gi = 0; gi < family.groups.size(); ++gi) {
      const auto& g = family.groups[gi];
      for (std::size_t a = 0; a < g.members.size(); ++a) {
        const auto& s = g.members[a];
        distinct.insert(s);
        for (int b = 1; b <= m_o; ++b) {
          const std::vector<int> constant(static_cast<std::size_t>(m_o), b);
          originals_one = originals_one && oracle::positional_matches(s.elements(), constant) == 1;
        }
        for (std::size_t c = a + 1; c < g.members.size(); ++c)
          within_zero = within_zero && oracle::positional_matches(s.elements(), g.members[c].elements()) == 0;
        for (std::size_t gj = gi + 1; gj < family.groups.size(); ++gj) {
          for (const auto& t : family.groups[gj].members) {
            exact_one = exact_one && oracle::positional_matches(s.elements(), t.elements()) == 1;
            ++pairs;
          }
        }
      }
    }
    const bool all_distinct = distinct.size() == static_cast<std::size_t>(alpha * m_o);
    out.push_back({"congruence groups " + tag + " alpha=" + std::to_string(alpha),
                   exact_one && within_zero && originals_one && all_distinct,
                   std::to_string(pairs) + " cross-group pairs"});
  }
  return out;
}

std::vector<CheckResult> verify_covariance(int m_o, std::span<const double> sigma_x2_values) {
  std::vector<CheckResult> out;
  const std::string tag = "m_o=" + std::to_string(m_o);

  double worst_single = 0.0;
  double worst_multi = 0.0;
  double worst_dv = 0.0;
  double worst_eig = 0.0;
  bool structure_ok = true;
  bool multiplicities_ok = true;
  bool contracts_ok = true;
  bool definite_ok = true;

  for (double s : sigma_x2_values) {
    for (int m_e = 0; m_e <= m_o; ++m_e) {
      const auto model = CovarianceModel<long double>::single_group(s, m_o, m_e);
      const auto sigma_y = build_sigma_y(model).values;
      worst_single = std::max(worst_single, rel_err(det_sigma_y_single_group(model), oracle::determinant(sigma_y)));
      const auto seqs = extension_sequences(m_o, Rational(m_e, m_o));
      const Eigen::MatrixXd from_rows = oracle::covariance_from_rows(s, m_o, as_rows(seqs));
      structure_ok = structure_ok && (build_sigma_w(model).values.cast<double>() - from_rows).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, s);
      definite_ok = definite_ok && definite(model);
    }
    for (int alpha = 1; alpha <= m_o - 1; ++alpha) {
      const auto model = CovarianceModel<long double>::multi_group(s, m_o, alpha);
      const auto sigma_w = build_sigma_w(model).values;
      const auto sigma_y = build_sigma_y(model).values;
      worst_multi = std::max(worst_multi, rel_err(det_sigma_y_multi_group(model), oracle::determinant(sigma_y)));
      if (is_prime(m_o)) {
        const auto seqs = extension_sequences(m_o, Rational(alpha));
        const Eigen::MatrixXd from_rows = oracle::covariance_from_rows(s, m_o, as_rows(seqs));
        structure_ok = structure_ok && (sigma_w.cast<double>() - from_rows).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, s);
      }
      definite_ok = definite_ok && definite(model);
    }

    const double beta = s / (s + 1.0);
    for (int k = 1; k <= std::max(2, m_o); ++k) {
      const Eigen::MatrixXd v = build_v<double>(k, beta, m_o);
      worst_dv = std::max(worst_dv, rel_err(det_v<long double>(k, beta, m_o), oracle::determinant(v)));

      const auto closed = eigen_v<double>(k, beta, m_o);
      const auto numeric = oracle::clustered_spectrum(v, kEigenTolerance);
      if (closed.size() != numeric.size()) {
        multiplicities_ok = false;
      } else {
        for (std::size_t i = 0; i < closed.size(); ++i) {
          multiplicities_ok = multiplicities_ok && closed[i].multiplicity == numeric[i].multiplicity;
          worst_eig = std::max(worst_eig, std::fabs(closed[i].value - numeric[i].value));
        }
      }
      if (k >= 2 && beta > 0.0) {
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(v);
        const double top = 1.0 + (k - 1) * beta;
        const double root = std::sqrt(static_cast<double>(k * m_o));
        for (Eigen::Index i = 0; i < v.rows(); ++i) {
          const double along_ones = eig.eigenvectors().col(i).sum();
          if (std::fabs(eig.eigenvalues()(i) - top) < kEigenTolerance * top) {
            contracts_ok = contracts_ok && std::fabs(std::fabs(along_ones) - root) < 1e-8 * root;
          } else {
            contracts_ok = contracts_ok && std::fabs(along_ones) < 1e-8;
          }
        }
      }
    }
  }

  out.push_back({"single-group det(Sigma_Y) " + tag, worst_single <= kDeterminantTolerance, "max rel err " + fmt(worst_single)});
  if (m_o >= 2) {
    out.push_back({"multi-group det(Sigma_Y) " + tag, worst_multi <= kDeterminantTolerance, "max rel err " + fmt(worst_multi)});
  }
  out.push_back({"Sigma_W/Sigma_Y definiteness " + tag, definite_ok, ""});
  out.push_back({"Sigma_W matches row provenance " + tag, structure_ok, ""});
  out.push_back({"det V(k) " + tag, worst_dv <= kDeterminantTolerance, "max rel err " + fmt(worst_dv)});
  out.push_back({"V(k) spectrum " + tag, multiplicities_ok && worst_eig <= kEigenTolerance,
                 "max eigenvalue err " + fmt(worst_eig)});
  out.push_back({"V(k) eigenvector contracts " + tag, contracts_ok, ""});
  return out;
}

CheckResult verify_capacity(int m_o, const Rational& alpha, double gamma) {
  const ExtensionCase c = case_for(alpha);
  BoundQuery q{gamma, alpha, m_o, 1.0, 0.0, c};
  const double closed = capacity_ub(q);
  const CovarianceModel<long double> model(gamma, m_o, alpha, c);
  const long double numeric = oracle::log2_abs_determinant(build_sigma_y(model).values) / 2;
  const double err = rel_err(closed, numeric);
  return {"capacity vs log2 det m_o=" + std::to_string(m_o) + " alpha=" + alpha.to_string() + " gamma=" + fmt(gamma),
          err <= kDeterminantTolerance, "closed " + fmt(closed) + ", rel err " + fmt(err)};
}

bool print_report(std::ostream& out, std::span<const CheckResult> checks) {
  std::size_t width = 5;
  for (const auto& c : checks) width = std::max(width, c.name.size());
  bool all = true;
  for (const auto& c : checks) {
    all = all && c.passed;
    out << std::left << std::setw(static_cast<int>(width)) << c.name << "  " << (c.passed ? "PASS" : "FAIL");
    if (!c.detail.empty()) out << "  " << c.detail;
    out << '\n';
  }
  out << (all ? "all checks passed" : "verification FAILED") << " (" << checks.size() << " checks)\n";
  return all;
}

}  // namespace segcs
