#pragma once

// Brute-force and numeric reference computations. Nothing here calls the
// closed forms it is used to check.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace segcs::oracle {

/// Determinant by full-pivot LU in extended precision.
template <typename Derived>
long double determinant(const Eigen::MatrixBase<Derived>& a) {
  return a.template cast<long double>().fullPivLu().determinant();
}

/// log2 |det a| from the LU factors; avoids overflow of large determinants.
template <typename Derived>
long double log2_abs_determinant(const Eigen::MatrixBase<Derived>& a) {
  const Eigen::FullPivLU<Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>> lu(a.template cast<long double>());
  const auto& factors = lu.matrixLU();
  long double sum = 0;
  for (Eigen::Index i = 0; i < factors.rows(); ++i) sum += std::log2(std::fabs(factors(i, i)));
  return sum;
}

inline int positional_matches(std::span<const int> a, std::span<const int> b) {
  int count = 0;
  for (std::size_t k = 0; k < a.size() && k < b.size(); ++k) count += a[k] == b[k] ? 1 : 0;
  return count;
}

/// All m_o! permutations of (1, ..., m_o) in lexicographic order.
inline std::vector<std::vector<int>> all_permutations(int m_o) {
  std::vector<int> p(static_cast<std::size_t>(m_o));
  std::iota(p.begin(), p.end(), 1);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

/// E[w w^T] implied directly by row provenance: rows share one segment of
/// length n/m_o per matching position, so entry (i, j) = sigma_x2 * matches / m_o.
/// Original row b is the constant sequence (b, ..., b).
inline Eigen::MatrixXd covariance_from_rows(double sigma_x2, int m_o, std::span<const std::vector<int>> extended) {
  std::vector<std::vector<int>> rows;
  for (int b = 1; b <= m_o; ++b) rows.emplace_back(static_cast<std::size_t>(m_o), b);
  rows.insert(rows.end(), extended.begin(), extended.end());
  const auto m = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd w(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      w(i, j) = sigma_x2 * positional_matches(rows[i], rows[j]) / m_o;
    }
  }
  return w;
}

struct SpectrumCluster {
  double value;
  int multiplicity;
};

/// Eigenvalues of a symmetric matrix grouped into clusters: consecutive sorted
/// values closer than rel_threshold * max(1, spectral radius) share a cluster.
inline std::vector<SpectrumCluster> clustered_spectrum(const Eigen::MatrixXd& symmetric, double rel_threshold = 1e-8) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd values = solver.eigenvalues();
  const double radius = values.cwiseAbs().maxCoeff();
  const double threshold = rel_threshold * std::max(1.0, radius);
  std::vector<SpectrumCluster> clusters;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (!clusters.empty() && values(i) - values(i - 1) < threshold) {
      auto& c = clusters.back();
      c.value = (c.value * c.multiplicity + values(i)) / (c.multiplicity + 1);
      ++c.multiplicity;
    } else {
      clusters.push_back({values(i), 1});
    }
  }
  return clusters;
}

}  // namespace segcs::oracle
