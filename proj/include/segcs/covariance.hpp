#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "segcs/error.hpp"
#include "segcs/rational.hpp"

namespace segcs {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// How the extended rows were chosen.
enum class ExtensionCase {
  single_group,  ///< m_e <= m_o rows from one cyclic group; alpha in {0, 1/m_o, ..., 1}
  multi_group,   ///< every row of alpha congruence groups; alpha in {1, ..., m_o - 1}
};

const char* to_string(ExtensionCase c) noexcept;

/// Throws Errc::alpha_out_of_range when `alpha` is not admissible for (`c`, `m_o`).
void check_extension_rate(ExtensionCase c, int m_o, const Rational& alpha);

/// Single-group for alpha <= 1, multi-group otherwise.
inline ExtensionCase case_for(const Rational& alpha) {
  return alpha <= Rational(1) ? ExtensionCase::single_group : ExtensionCase::multi_group;
}

template <typename Scalar>
class CovarianceModel {
 public:
  CovarianceModel(Scalar sigma_x2, int m_o, Rational alpha, ExtensionCase c)
      : sigma_x2_(sigma_x2), m_o_(m_o), alpha_(alpha), case_(c) {
    if (!(sigma_x2 >= Scalar(0)) || !std::isfinite(static_cast<double>(sigma_x2))) {
      throw Error(Errc::domain, "signal variance must be finite and >= 0");
    }
    if (m_o < 1) throw Error(Errc::domain, "m_o must be >= 1");
    check_extension_rate(c, m_o, alpha);
  }

  static CovarianceModel single_group(Scalar sigma_x2, int m_o, int m_e) {
    if (m_o < 1) throw Error(Errc::domain, "m_o must be >= 1");
    return CovarianceModel(sigma_x2, m_o, Rational(m_e, m_o), ExtensionCase::single_group);
  }
  static CovarianceModel multi_group(Scalar sigma_x2, int m_o, int alpha) {
    return CovarianceModel(sigma_x2, m_o, Rational(alpha), ExtensionCase::multi_group);
  }

  Scalar sigma_x2() const noexcept { return sigma_x2_; }
  /// Under unit-variance noise and unit-energy rows the per-sample SNR equals sigma_x2.
  Scalar gamma() const noexcept { return sigma_x2_; }
  Scalar beta() const noexcept { return sigma_x2_ / (sigma_x2_ + Scalar(1)); }
  int m_o() const noexcept { return m_o_; }
  int m_e() const noexcept { return static_cast<int>((alpha_ * Rational(m_o_)).num()); }
  int m() const noexcept { return m_o_ + m_e(); }
  const Rational& alpha() const noexcept { return alpha_; }
  ExtensionCase extension_case() const noexcept { return case_; }

 private:
  Scalar sigma_x2_;
  int m_o_;
  Rational alpha_;
  ExtensionCase case_;
};

enum class Structure { sigma_w, sigma_y, u, v };

template <typename Scalar>
struct StructuredMatrix {
  MatrixX<Scalar> values;
  Structure structure;
};

/// U(1) = s I_{m_o};  U(k+1) = [[s I, (s/m_o) 1], [(s/m_o) 1, U(k)]].
template <typename Scalar>
MatrixX<Scalar> build_u(int k, Scalar sigma_x2, int m_o) {
  if (k < 1 || m_o < 1) throw Error(Errc::domain, "build_u needs k >= 1 and m_o >= 1");
  MatrixX<Scalar> u = sigma_x2 * MatrixX<Scalar>::Identity(m_o, m_o);
  const Scalar cross = sigma_x2 / Scalar(m_o);
  for (int step = 1; step < k; ++step) {
    const Eigen::Index inner = u.rows();
    MatrixX<Scalar> next(inner + m_o, inner + m_o);
    next.topLeftCorner(m_o, m_o) = sigma_x2 * MatrixX<Scalar>::Identity(m_o, m_o);
    next.topRightCorner(m_o, inner).setConstant(cross);
    next.bottomLeftCorner(inner, m_o).setConstant(cross);
    next.bottomRightCorner(inner, inner) = u;
    u = std::move(next);
  }
  return u;
}

/// V(k) = (U(k) + I) / (s + 1): unit diagonal blocks, beta/m_o in every cross-group block.
template <typename Scalar>
MatrixX<Scalar> build_v(int k, Scalar beta, int m_o) {
  if (!(beta >= Scalar(0) && beta < Scalar(1))) throw Error(Errc::domain, "beta must lie in [0, 1)");
  // beta = s / (s + 1)  <=>  s = beta / (1 - beta)
  const Scalar sigma_x2 = beta / (Scalar(1) - beta);
  MatrixX<Scalar> v = build_u(k, sigma_x2, m_o);
  v.diagonal().array() += Scalar(1);
  return v / (sigma_x2 + Scalar(1));
}

template <typename Scalar>
StructuredMatrix<Scalar> build_sigma_w(const CovarianceModel<Scalar>& model) {
  const int m_o = model.m_o();
  const Scalar s = model.sigma_x2();
  if (model.extension_case() == ExtensionCase::multi_group) {
    return {build_u(static_cast<int>(model.alpha().num()) + 1, s, m_o), Structure::sigma_w};
  }
  const int m_e = model.m_e();
  MatrixX<Scalar> w = s * MatrixX<Scalar>::Identity(model.m(), model.m());
  w.topRightCorner(m_o, m_e).setConstant(s / Scalar(m_o));
  w.bottomLeftCorner(m_e, m_o).setConstant(s / Scalar(m_o));
  return {std::move(w), Structure::sigma_w};
}

/// Sigma_Y = Sigma_W + I (unit-variance white noise).
template <typename Scalar>
StructuredMatrix<Scalar> build_sigma_y(const CovarianceModel<Scalar>& model) {
  auto y = build_sigma_w(model);
  y.values.diagonal().array() += Scalar(1);
  y.structure = Structure::sigma_y;
  return y;
}

/// (s + 1)^m (1 - beta^2 alpha).
template <typename Scalar>
Scalar det_sigma_y_single_group(const CovarianceModel<Scalar>& model) {
  if (model.extension_case() != ExtensionCase::single_group) {
    throw Error(Errc::wrong_case, "det_sigma_y_single_group called on a multi-group model");
  }
  using std::pow;
  const Scalar beta = model.beta();
  return pow(model.sigma_x2() + Scalar(1), Scalar(model.m())) *
         (Scalar(1) - beta * beta * model.alpha().template as<Scalar>());
}

/// (1 - beta)^(k-1) (1 + (k-1) beta), independent of m_o.
template <typename Scalar>
Scalar det_v(int k, Scalar beta, int m_o) {
  if (k < 1 || m_o < 1) throw Error(Errc::domain, "det_v needs k >= 1 and m_o >= 1");
  if (!(beta >= Scalar(0) && beta < Scalar(1))) throw Error(Errc::domain, "beta must lie in [0, 1)");
  using std::pow;
  return pow(Scalar(1) - beta, Scalar(k - 1)) * (Scalar(1) + Scalar(k - 1) * beta);
}

/// (s + 1)^m (1 - beta)^alpha (1 + alpha beta).
template <typename Scalar>
Scalar det_sigma_y_multi_group(const CovarianceModel<Scalar>& model) {
  if (model.extension_case() != ExtensionCase::multi_group) {
    throw Error(Errc::wrong_case, "det_sigma_y_multi_group called on a single-group model");
  }
  using std::pow;
  const int alpha = static_cast<int>(model.alpha().num());
  return pow(model.sigma_x2() + Scalar(1), Scalar(model.m())) * det_v(alpha + 1, model.beta(), model.m_o());
}

template <typename Scalar>
Scalar det_sigma_y(const CovarianceModel<Scalar>& model) {
  return model.extension_case() == ExtensionCase::single_group ? det_sigma_y_single_group(model)
                                                               : det_sigma_y_multi_group(model);
}

template <typename Scalar>
struct EigenvalueMultiplicity {
  Scalar value;
  int multiplicity;
};

/// Spectrum of V(k): 1 with multiplicity (m_o-1)k, 1-beta with k-1, 1+(k-1)beta once.
/// Coinciding values (k = 1, beta = 0) are merged; zero multiplicities dropped.
/// Sorted by ascending value.
template <typename Scalar>
std::vector<EigenvalueMultiplicity<Scalar>> eigen_v(int k, Scalar beta, int m_o) {
  if (k < 1 || m_o < 1) throw Error(Errc::domain, "eigen_v needs k >= 1 and m_o >= 1");
  if (!(beta >= Scalar(0) && beta < Scalar(1))) throw Error(Errc::domain, "beta must lie in [0, 1)");
  const EigenvalueMultiplicity<Scalar> raw[] = {
      {Scalar(1), (m_o - 1) * k},
      {Scalar(1) - beta, k - 1},
      {Scalar(1) + Scalar(k - 1) * beta, 1},
  };
  std::vector<EigenvalueMultiplicity<Scalar>> out;
  for (const auto& e : raw) {
    if (e.multiplicity == 0) continue;
    auto same = std::find_if(out.begin(), out.end(), [&](const auto& o) { return o.value == e.value; });
    if (same != out.end()) {
      same->multiplicity += e.multiplicity;
    } else {
      out.push_back(e);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.value < b.value; });
  return out;
}

}  // namespace segcs
