#include <doctest.h>

#include <cmath>
#include <vector>

#include "segcs/bounds.hpp"
#include "segcs/covariance.hpp"
#include "segcs/oracle.hpp"

using namespace segcs;

namespace {

template <typename F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected segcs::Error");
  return Errc::domain;
}

double half_log2_det(const CovarianceModel<double>& model) {
  return static_cast<double>(oracle::log2_abs_determinant(build_sigma_y(model).values)) / 2.0;
}

const std::vector<double> kGammas{0.1, 1.0, 10.0, 100.0, 1000.0};

}  // namespace

TEST_CASE("baseline capacity") {
  CHECK(baseline_capacity_ub(100.0, 0.0, 6) == doctest::Approx(19.974634448255383).epsilon(1e-14));
  CHECK(baseline_capacity_ub(100.0, 0.0, 6) ==
        doctest::Approx(double(oracle::log2_abs_determinant(Eigen::MatrixXd::Identity(6, 6) * 101.0)) / 2).epsilon(1e-14));
  CHECK(baseline_capacity_ub(0.0, 0.0, 6) == 0.0);
  CHECK(baseline_capacity_ub(4.0, 2.0, 6) == 0.0);
  CHECK(code_of([] { baseline_capacity_ub(1.0, 2.0, 3); }) == Errc::domain);
  CHECK(code_of([] { baseline_capacity_ub(1.0, 0.0, -1); }) == Errc::domain);
}

TEST_CASE("capacity examples") {
  CHECK(capacity_ub_single_group(100.0, 1.0, 3) == doctest::Approx(17.14194881109304).epsilon(1e-14));
  CHECK(capacity_ub_multi_group(100.0, 2.0, 3) == doctest::Approx(24.091444286635223).epsilon(1e-14));
  CHECK(capacity_ub_multi_group(100.0, 1.0, 3) == doctest::Approx(17.14194881109304).epsilon(1e-14));
  CHECK(capacity_ub_single_group(100.0, 0.0, 3) == doctest::Approx(baseline_capacity_ub(100.0, 0.0, 3)).epsilon(1e-15));
  CHECK(capacity_ub_single_group(0.0, 1.0, 3) == 0.0);
  CHECK(capacity_ub_multi_group(0.0, 2.0, 3) == 0.0);
  CHECK(code_of([] { capacity_ub_single_group(1.0, 1.5, 3); }) == Errc::alpha_out_of_range);
  CHECK(code_of([] { capacity_ub_multi_group(1.0, 0.5, 3); }) == Errc::alpha_out_of_range);
  CHECK(code_of([] { capacity_ub_single_group(-1.0, 0.5, 2); }) == Errc::domain);
}

TEST_CASE("capacity grid at gamma 10, m_o 5") {
  const double expected[] = {8.648579046593245,  10.247968978650492, 11.818504048035557,
                             13.343663524693335, 14.786786667539582, 16.03388518593857};
  for (int k = 0; k <= 5; ++k) CHECK(capacity_ub_single_group(10.0, k / 5.0, 5) == doctest::Approx(expected[k]).epsilon(1e-13));
  CHECK(optimal_alpha_single_group(10.0, 5).discrete == Rational(1));
}

TEST_CASE("closed forms equal half log2 det sigma_y") {
  for (int m_o = 1; m_o <= 7; ++m_o) {
    for (double s : {0.1, 1.0, 10.0, 100.0}) {
      for (int m_e = 0; m_e <= m_o; ++m_e) {
        const double closed = capacity_ub_single_group(s, double(m_e) / m_o, m_o);
        const double numeric = half_log2_det(CovarianceModel<double>::single_group(s, m_o, m_e));
        REQUIRE(std::fabs(closed - numeric) <= 1e-9 * std::fabs(numeric));
      }
      for (int a = 1; a <= m_o - 1; ++a) {
        const double closed = capacity_ub_multi_group(s, double(a), m_o);
        const double numeric = half_log2_det(CovarianceModel<double>::multi_group(s, m_o, a));
        REQUIRE(std::fabs(closed - numeric) <= 1e-9 * std::fabs(numeric));
      }
    }
  }
}

TEST_CASE("penalty signs") {
  for (double g : kGammas) {
    for (double a = 0.0; a <= 1.0; a += 0.125) CHECK(single_group_penalty(g, a) <= 0.0);
    for (int a = 1; a <= 20; ++a) CHECK(multi_group_penalty(g, double(a)) >= -1e-15);
    CHECK(single_group_penalty(g, 0.0) == 0.0);
    CHECK(multi_group_penalty(g, 0.0) == doctest::Approx(0.0).scale(1.0));
  }
}

TEST_CASE("optimal single-group extension rate") {
  const auto ex = optimal_alpha_single_group(100.0, 3);
  CHECK(ex.stationary_point == doctest::Approx(0.9478736448881562).epsilon(1e-14));
  CHECK(ex.continuous == ex.stationary_point);
  CHECK(ex.discrete == Rational(1));
  CHECK(std::fabs(ex.stationary_point - 0.95) <= 0.005);

  // Small gamma pushes the stationary point past 1.
  const auto low = optimal_alpha_single_group(1.0, 3);
  CHECK(low.stationary_point > 1.0);
  CHECK(low.continuous == 1.0);

  CHECK(code_of([] { optimal_alpha_single_group(0.0, 3); }) == Errc::domain);
  CHECK(code_of([] { optimal_alpha_single_group(1.0, 0); }) == Errc::domain);
}

TEST_CASE("full group is the discrete optimum everywhere") {
  for (double g : kGammas) {
    for (int m_o = 1; m_o <= 20; ++m_o) {
      INFO("gamma=" << g << " m_o=" << m_o);
      CHECK(optimal_alpha_single_group(g, m_o).discrete == Rational(1));
      CHECK(capacity_ub_single_group(g, 1.0, m_o) > capacity_ub_single_group(g, double(m_o - 1) / m_o, m_o));
    }
  }
  for (int m_o = 1; m_o <= 20; ++m_o) CHECK(optimal_alpha_single_group(100.0, m_o).discrete == Rational(1));
}

TEST_CASE("multi-group bound grows with alpha") {
  for (double g : {0.0, 0.1, 1.0, 10.0, 100.0, 1000.0}) {
    for (int m_o = 2; m_o <= 13; ++m_o) {
      const auto report = monotonicity_multi_group(g, m_o);
      INFO("gamma=" << g << " m_o=" << m_o);
      CHECK(report.passed());
      CHECK(report.capacity.size() == static_cast<std::size_t>(m_o - 1));
    }
  }
  CHECK(code_of([] { monotonicity_multi_group(1.0, 1); }) == Errc::domain);
}

TEST_CASE("sampling-rate examples") {
  CHECK(delta_lb_single_group(0.0013, 100.0, 1.0, 1e7) == doctest::Approx(0.00039058034486652197).epsilon(1e-13));
  CHECK(delta_lb_multi_group(0.0013, 100.0, 5.0, 1e7) == doctest::Approx(0.0003909566122246011).epsilon(1e-13));
  const double base = delta_lb_baseline(0.0013, 100.0);
  CHECK(base == doctest::Approx(2 * 0.0013 / std::log2(101.0)).epsilon(1e-15));
  CHECK(delta_lb_single_group(0.0013, 100.0, 0.0, 1e7) == base);
  CHECK(delta_lb_multi_group(0.0013, 100.0, 5.0, 1e7) - base ==
        doctest::Approx((6.0 - std::log2(601.0) / std::log2(101.0)) / 1e7).epsilon(1e-6));
  CHECK(delta_lb_multi_group(0.2, 10.0, 1.0, 50.0) == doctest::Approx(delta_lb_single_group(0.2, 10.0, 1.0, 50.0)).epsilon(1e-13));
}

TEST_CASE("sampling-rate bound follows from the capacity bound") {
  // n R <= C(m) with m = delta n; the bound is the delta where equality holds.
  for (double g : kGammas) {
    for (double n : {10.0, 100.0, 1e5}) {
      const double rd = 0.05;
      for (double a : {0.0, 0.25, 1.0}) {
        const double delta = delta_lb_single_group(rd, g, a, n);
        const double m = delta * n;
        const double cap = m / 2 * std::log2(g + 1) + single_group_penalty(g, a);
        CHECK(cap == doctest::Approx(n * rd).epsilon(1e-12));
      }
      for (double a : {1.0, 2.0, 5.0}) {
        const double delta = delta_lb_multi_group(rd, g, a, n);
        const double cap = delta * n / 2 * std::log2(g + 1) - multi_group_penalty(g, a);
        CHECK(cap == doctest::Approx(n * rd).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("penalty gap scales as 1/n") {
  const double base = delta_lb_baseline(0.0013, 100.0);
  const double g1a = delta_lb_single_group(0.0013, 100.0, 1.0, 1e5) - base;
  const double g1b = delta_lb_single_group(0.0013, 100.0, 1.0, 1e7) - base;
  CHECK(std::fabs(g1a / g1b / 100.0 - 1.0) <= 1e-12);
  const double g2a = delta_lb_multi_group(0.0013, 100.0, 5.0, 1e5) - base;
  const double g2b = delta_lb_multi_group(0.0013, 100.0, 5.0, 1e7) - base;
  CHECK(std::fabs(g2a / g2b / 100.0 - 1.0) <= 1e-12);
  // Doubling n halves the penalty.
  const double h1 = delta_lb_single_group(0.1, 10.0, 0.5, 200.0) - delta_lb_baseline(0.1, 10.0);
  const double h2 = delta_lb_single_group(0.1, 10.0, 0.5, 400.0) - delta_lb_baseline(0.1, 10.0);
  CHECK(h1 / h2 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(delta_lb_multi_group(0.1, 10.0, 3.0, 1e15) == doctest::Approx(delta_lb_baseline(0.1, 10.0)).epsilon(1e-12));
}

TEST_CASE("sampling-rate bounds fall with SNR") {
  for (double n : {1e5, 1e7}) {
    double prev0 = INFINITY, prev1 = INFINITY, prev5 = INFINITY;
    for (int db = 0; db <= 30; ++db) {
      const double g = std::pow(10.0, db / 10.0);
      const double d0 = delta_lb_single_group(0.0013, g, 0.0, n);
      const double d1 = delta_lb_single_group(0.0013, g, 1.0, n);
      const double d5 = delta_lb_multi_group(0.0013, g, 5.0, n);
      CHECK(d0 < prev0);
      CHECK(d1 < prev1);
      CHECK(d5 < prev5);
      prev0 = d0;
      prev1 = d1;
      prev5 = d5;
    }
  }
}

TEST_CASE("original-rate bounds") {
  const double expected[] = {0.060076193289475194, 0.04570013144871236, 0.037423744208774805, 0.0342925208913997};
  double prev = INFINITY;
  for (int k = 0; k <= 3; ++k) {
    const double v = delta_o_lb_single_group(0.2, 100.0, k / 3.0, 100.0);
    CHECK(v == doctest::Approx(expected[k]).epsilon(1e-13));
    CHECK(v < prev);
    prev = v;
  }
  CHECK(delta_o_lb_single_group(0.2, 100.0, 0.0, 100.0) == delta_lb_single_group(0.2, 100.0, 0.0, 100.0));
  // Multi-group form is the rate bound divided by 1 + alpha.
  for (double a : {1.0, 2.0, 5.0}) {
    CHECK(delta_o_lb_multi_group(0.0013, 100.0, a, 1e7) ==
          doctest::Approx(delta_lb_multi_group(0.0013, 100.0, a, 1e7) / (1 + a)).epsilon(1e-13));
  }
  double limit_prev = INFINITY;
  for (int a = 0; a <= 10; ++a) {
    const double v = delta_o_lb_limit(0.0013, 100.0, double(a));
    CHECK(v < limit_prev);
    limit_prev = v;
  }
}

TEST_CASE("sampling-rate domain errors") {
  CHECK(code_of([] { delta_lb_baseline(0.1, 0.0); }) == Errc::domain);
  CHECK(code_of([] { delta_lb_single_group(0.1, 0.0, 0.5, 10.0); }) == Errc::domain);
  CHECK(code_of([] { delta_lb_single_group(-0.1, 1.0, 0.5, 10.0); }) == Errc::domain);
  CHECK(code_of([] { delta_lb_single_group(0.1, 1.0, 0.5, 0.5); }) == Errc::domain);
  CHECK(code_of([] { delta_lb_multi_group(0.1, 1.0, 0.5, 10.0); }) == Errc::alpha_out_of_range);
  CHECK(code_of([] { delta_o_lb_multi_group(0.1, 0.0, 2.0, 10.0); }) == Errc::domain);
}

TEST_CASE("sparse rate-distortion") {
  CHECK(rate_distortion_sparse(1e-4) == doctest::Approx(0.0013287712379549449).epsilon(1e-15));
  CHECK(std::round(rate_distortion_sparse(1e-4) * 1e4) / 1e4 == 0.0013);
  CHECK(rate_distortion_sparse(0.01) == doctest::Approx(0.06643856189774724).epsilon(1e-15));
  CHECK(rate_distortion_sparse(0.5) == doctest::Approx(0.5));
  CHECK(code_of([] { rate_distortion_sparse(0.0); }) == Errc::domain);
  CHECK(code_of([] { rate_distortion_sparse(1.0); }) == Errc::domain);
}

TEST_CASE("query dispatch") {
  BoundQuery q;
  q.gamma = 100.0;
  q.alpha = Rational(1);
  q.m_o = 3;
  q.n = 100.0;
  q.rd = 0.2;
  const auto r = evaluate(q);
  CHECK(r.capacity_ub == doctest::Approx(17.14194881109304).epsilon(1e-14));
  CHECK(r.delta_o_lb == doctest::Approx(0.0342925208913997).epsilon(1e-13));

  q.alpha = Rational(2);
  CHECK(code_of([&] { evaluate(q); }) == Errc::alpha_out_of_range);
  q.extension_case = ExtensionCase::multi_group;
  CHECK(evaluate(q).capacity_ub == doctest::Approx(24.091444286635223).epsilon(1e-14));
  q.alpha = Rational(3);
  CHECK(code_of([&] { evaluate(q); }) == Errc::alpha_out_of_range);
  q.alpha = Rational(2);
  q.gamma = -1.0;
  CHECK(code_of([&] { evaluate(q); }) == Errc::domain);
}
