// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
// argv[1] is the path of the segcs executable (used by the reproducibility check).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "segcs/bounds.hpp"
#include "segcs/covariance.hpp"
#include "segcs/oracle.hpp"
#include "segcs/permgroup.hpp"
#include "segcs/recovery.hpp"
#include "segcs/sampler.hpp"

using namespace segcs;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
};

long long factorial(int k) {
  long long f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

long double rel_err(long double value, long double reference) {
  const long double scale = std::max(std::fabs(value), std::fabs(reference));
  return scale == 0 ? 0 : std::fabs(value - reference) / scale;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

const std::vector<double> kVariances{0.1, 1.0, 10.0, 100.0};

// Every admissible extension for m_o: k/m_o in the single-group case, integers 1..m_o-1 otherwise.
std::vector<CovarianceModel<long double>> admissible_models(int m_o, double s) {
  std::vector<CovarianceModel<long double>> models;
  for (int m_e = 0; m_e <= m_o; ++m_e) models.push_back(CovarianceModel<long double>::single_group(s, m_o, m_e));
  for (int a = 1; a <= m_o - 1; ++a) models.push_back(CovarianceModel<long double>::multi_group(s, m_o, a));
  return models;
}

Outcome cyclic_partition() {
  Outcome o;
  for (int m_o = 2; m_o <= 6; ++m_o) {
    const auto groups = cyclic_grouping(m_o);
    bool ok = groups.size() == static_cast<std::size_t>(factorial(m_o - 1));
    std::multiset<std::vector<int>> seen;
    for (const auto& g : groups) {
      ok = ok && g.members.size() == static_cast<std::size_t>(m_o);
      for (std::size_t a = 0; a < g.members.size(); ++a) {
        seen.emplace(g.members[a].elements().begin(), g.members[a].elements().end());
        for (std::size_t b = a + 1; b < g.members.size(); ++b)
          ok = ok && oracle::positional_matches(g.members[a].elements(), g.members[b].elements()) == 0;
      }
    }
    const auto all = oracle::all_permutations(m_o);
    ok = ok && seen == std::multiset<std::vector<int>>(all.begin(), all.end());
    if (!ok) {
      o.passed = false;
      o.detail += "m_o=" + std::to_string(m_o) + " failed; ";
    }
  }
  if (o.passed) o.detail = "m_o 2..6, up to 120 groups";
  return o;
}

Outcome congruence_cross_correlation() {
  Outcome o;
  long pairs = 0;
  for (int m_o : {2, 3, 5, 7, 11}) {
    for (int alpha = 1; alpha <= m_o - 1; ++alpha) {
      const auto family = congruence_groups(m_o, alpha);
      for (std::size_t gi = 0; gi < family.groups.size(); ++gi)
        for (std::size_t gj = gi + 1; gj < family.groups.size(); ++gj)
          for (const auto& s : family.groups[gi].members)
            for (const auto& t : family.groups[gj].members) {
              ++pairs;
              if (oracle::positional_matches(s.elements(), t.elements()) != 1) o.passed = false;
            }
    }
  }
  o.detail = std::to_string(pairs) + " cross-group pairs";
  return o;
}

Outcome determinant_oracle() {
  long double worst = 0;
  int count = 0;
  for (int m_o = 2; m_o <= 7; ++m_o) {
    for (double s : kVariances) {
      for (const auto& model : admissible_models(m_o, s)) {
        worst = std::max(worst, rel_err(det_sigma_y(model), oracle::determinant(build_sigma_y(model).values)));
        ++count;
        if (model.extension_case() == ExtensionCase::multi_group) {
          const int k = static_cast<int>(model.alpha().num()) + 1;
          const long double beta = model.beta();
          worst = std::max(worst, rel_err(det_v(k, beta, m_o), oracle::determinant(build_v(k, beta, m_o))));
          ++count;
        }
      }
    }
  }
  return {worst <= 1e-9L, std::to_string(count) + " determinants, max rel err " + fmt(double(worst))};
}

Outcome eigenvalue_lemma() {
  double worst = 0.0;
  bool multiplicities = true;
  bool contracts = true;
  for (int k = 1; k <= 6; ++k) {
    for (int m_o = 1; m_o <= 5; ++m_o) {
      for (double beta : {0.2, 0.5, 0.8, 0.99}) {
        const Eigen::MatrixXd v = build_v(k, beta, m_o);
        const auto closed = eigen_v(k, beta, m_o);
        const auto numeric = oracle::clustered_spectrum(v, 1e-8);
        if (closed.size() != numeric.size()) {
          multiplicities = false;
          continue;
        }
        for (std::size_t i = 0; i < closed.size(); ++i) {
          multiplicities = multiplicities && closed[i].multiplicity == numeric[i].multiplicity;
          worst = std::max(worst, std::fabs(closed[i].value - numeric[i].value));
        }
        if (k < 2) continue;
        // Top eigenvector is the normalized all-ones vector; every other one is orthogonal to it.
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(v);
        const double top = 1.0 + (k - 1) * beta;
        const double root = std::sqrt(double(k * m_o));
        for (Eigen::Index i = 0; i < v.rows(); ++i) {
          const double along = eig.eigenvectors().col(i).sum();
          if (std::fabs(eig.eigenvalues()(i) - top) < 1e-8 * top) {
            contracts = contracts && std::fabs(std::fabs(along) - root) < 1e-8 * root;
          } else {
            contracts = contracts && std::fabs(along) < 1e-8;
          }
        }
      }
    }
  }
  return {multiplicities && contracts && worst <= 1e-8,
          "max eigenvalue err " + fmt(worst) + (multiplicities ? "" : ", multiplicity mismatch") +
              (contracts ? "" : ", eigenvector contract broken")};
}

Outcome capacity_identity() {
  long double worst = 0;
  int count = 0;
  for (int m_o = 2; m_o <= 7; ++m_o) {
    for (double s : kVariances) {
      for (const auto& model : admissible_models(m_o, s)) {
        const double a = model.alpha().to_double();
        const double closed = model.extension_case() == ExtensionCase::single_group
                                  ? capacity_ub_single_group(s, a, m_o)
                                  : capacity_ub_multi_group(s, a, m_o);
        const long double numeric = oracle::log2_abs_determinant(build_sigma_y(model).values) / 2;
        worst = std::max(worst, rel_err(closed, numeric));
        ++count;
      }
    }
  }
  return {worst <= 1e-9L, std::to_string(count) + " bounds, max rel err " + fmt(double(worst))};
}

Outcome example_one() {
  const double gamma = std::pow(10.0, 20.0 / 10.0);
  const int m_o = 3;
  const auto opt = optimal_alpha_single_group(gamma, m_o);
  const bool stationary = std::fabs(opt.stationary_point - 0.95) <= 0.005;

  Rational best_capacity(0), best_rate(0);
  double max_capacity = -INFINITY, min_rate = INFINITY;
  for (int k = 0; k <= m_o; ++k) {
    const BoundQuery q{gamma, Rational(k, m_o), m_o, 100.0, 0.2, ExtensionCase::single_group};
    const BoundResult r = evaluate(q);
    if (r.capacity_ub > max_capacity) {
      max_capacity = r.capacity_ub;
      best_capacity = q.alpha;
    }
    if (r.delta_o_lb < min_rate) {
      min_rate = r.delta_o_lb;
      best_rate = q.alpha;
    }
  }
  const bool ok = stationary && opt.discrete == Rational(1) && best_capacity == Rational(1) && best_rate == Rational(1);
  return {ok, "stationary alpha " + fmt(opt.stationary_point) + ", capacity argmax " + best_capacity.to_string() +
                  ", original-rate argmin " + best_rate.to_string()};
}

Outcome example_two() {
  const double rd = rate_distortion_sparse(1e-4);
  char two_sig[32];
  std::snprintf(two_sig, sizeof two_sig, "%.2g", rd);
  return {std::string(two_sig) == "0.0013", "R(D) = " + std::string(two_sig) + " (" + fmt(rd) + ")"};
}

Outcome vanishing_penalty() {
  // Extended precision keeps the subtraction of the baseline from swamping the 1e-12 tolerance.
  using L = long double;
  const L gamma = 100, rd = 0.0013L;
  const L base = delta_lb_baseline(rd, gamma);
  auto gap = [&](L alpha, L n) {
    return (alpha <= 1 ? delta_lb_single_group(rd, gamma, alpha, n) : delta_lb_multi_group(rd, gamma, alpha, n)) - base;
  };
  L worst = 0;
  for (L alpha : {L(1), L(5)}) worst = std::max(worst, std::fabs(gap(alpha, 1e5L) / gap(alpha, 1e7L) / 100 - 1));

  bool monotone = true;
  for (double n : {1e5, 1e7}) {
    for (double alpha : {0.0, 1.0, 5.0}) {
      double prev = INFINITY;
      for (int db = 0; db <= 30; ++db) {
        const double g = std::pow(10.0, db / 10.0);
        const double d = alpha <= 1.0 ? delta_lb_single_group(0.0013, g, alpha, n) : delta_lb_multi_group(0.0013, g, alpha, n);
        monotone = monotone && d < prev;
        prev = d;
      }
    }
  }
  return {worst <= 1e-12L && monotone,
          "gap ratio rel err " + fmt(double(worst)) + (monotone ? ", decreasing in SNR" : ", NOT monotone in SNR")};
}

Outcome monte_carlo_covariance() {
  const int m_o = 3, n = 12, runs = 20;
  const long trials = 100000;
  const auto seqs = extension_sequences(m_o, Rational(1));
  const SignalModel signal{IidGaussian{1.0}, n};
  // Closed form: unit diagonal, 1/3 between an original and an extended row, 0 elsewhere.
  Eigen::MatrixXd expected = Eigen::MatrixXd::Identity(6, 6);
  expected.topRightCorner(3, 3).setConstant(1.0 / 3.0);
  expected.bottomLeftCorner(3, 3).setConstant(1.0 / 3.0);

  int outside = 0, checked = 0;
  for (int run = 0; run < runs; ++run) {
    const auto est = empirical_covariance(MatrixSpec{m_o, n, EntryDistribution::gaussian, 0}, seqs, signal, trials,
                                          1000u + static_cast<unsigned>(run));
    for (Eigen::Index i = 0; i < 6; ++i)
      for (Eigen::Index j = i; j < 6; ++j, ++checked)
        outside += std::fabs(est.mean(i, j) - expected(i, j)) > 3.0 * est.std_error(i, j) ? 1 : 0;
  }
  const double rate = double(outside) / checked;
  return {rate <= 0.01, std::to_string(outside) + "/" + std::to_string(checked) +
                            " distinct entries beyond 3 SE over 20 seeds (" + fmt(100 * rate) + "%)"};
}

Outcome assembly_equivalence() {
  std::mt19937_64 rng(20130501);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  for (int instance = 0; instance < 1000; ++instance) {
    const int m_o = std::uniform_int_distribution<int>(1, 7)(rng);
    const int l = std::uniform_int_distribution<int>(1, 16)(rng);
    Rational alpha(std::uniform_int_distribution<int>(0, m_o)(rng), m_o);
    if (is_prime(m_o) && instance % 2 == 0) alpha = Rational(std::uniform_int_distribution<int>(1, m_o - 1)(rng));
    const auto dist = instance % 3 == 0 ? EntryDistribution::rademacher : EntryDistribution::gaussian;
    const auto phi = generate(MatrixSpec{m_o, m_o * l, dist, rng()}, extension_sequences(m_o, alpha));
    Eigen::VectorXd x(m_o * l);
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = normal(rng);
    const Eigen::MatrixXd full = phi.full();
    const Eigen::VectorXd direct = full * x;
    const Eigen::VectorXd assembled = accumulate_subsamples(phi, x);
    // Relative to the magnitude the sum is accumulated from.
    const Eigen::VectorXd scale = full.cwiseAbs() * x.cwiseAbs();
    for (Eigen::Index i = 0; i < direct.size(); ++i) {
      if (scale(i) > 0.0) worst = std::max(worst, std::fabs(direct(i) - assembled(i)) / scale(i));
    }
  }
  return {worst <= 1e-12, "1000 instances, max rel err " + fmt(worst)};
}

Outcome recovery_demonstration() {
  const int m_o = 32, n = 256, s = 3;
  const double gamma = std::pow(10.0, 10.0 / 10.0);
  const std::vector<Rational> alphas{Rational(0), Rational(1)};
  const SignalModel signal{SparseSpikes{s, std::sqrt(gamma * n / s)}, n};
  Outcome o;
  for (std::uint64_t seed : {20130501ULL, 1ULL, 2ULL, 3ULL, 4ULL}) {
    RecoveryConfig config;
    config.sparsity = s;
    config.trials = 200;
    config.seed = seed;
    const auto r = mse_experiment(MatrixSpec{m_o, n, EntryDistribution::gaussian, seed}, signal, alphas, config);
    const double pooled = std::hypot(r[0].std_error, r[1].std_error);
    const double z = (r[0].mean - r[1].mean) / pooled;
    o.passed = o.passed && r[1].mean <= r[0].mean && z > 2.0;
    o.detail += (o.detail.empty() ? "" : ", ") + std::string("seed ") + std::to_string(seed) + ": z=" + fmt(z);
  }
  return o;
}

Outcome reproducibility(const std::string& tool) {
  const fs::path dir = fs::temp_directory_path() / ("segcs_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::vector<std::pair<std::string, std::vector<std::string>>> commands{
      {"bounds --figure 4 --out {}.csv", {".csv"}},
      {"bounds --figure 8 --out {}.csv", {".csv"}},
      {"bounds --gamma-db 0,10,20 --alpha 0,1/3,2 --m-o 3 --n 100,1000 --out {}.csv", {".csv"}},
      {"groups --m-o 5 --alpha 2 --out {}.txt", {".txt"}},
      {"matrix --m-o 5 --n 40 --alpha 2 --sample --seed 9 --out {}", {".txt", ".sequences.txt", ".samples.csv"}},
      {"matrix --m-o 3 --n 12 --distribution rademacher --out {}", {".txt", ".sequences.txt"}},
      {"recover --m-o 16 --n 128 --s 3 --trials 50 --seed 5 --out {}.csv", {".csv"}},
      {"recover --m-o 16 --n 128 --s 2 --trials 10 --solver ista --out {}.csv", {".csv"}},
      {"verify all --small > {}.txt", {".txt"}},
  };
  Outcome o;
  int files = 0;
  for (std::size_t c = 0; c < commands.size(); ++c) {
    std::string contents[2];
    for (int rep = 0; rep < 2; ++rep) {
      std::string cmd = commands[c].first;
      const std::string base = (dir / ("c" + std::to_string(c) + "_" + std::to_string(rep))).string();
      cmd.replace(cmd.find("{}"), 2, base);
      // Commands that already redirect stdout keep it; the rest are silenced.
      const std::string sink = cmd.find('>') == std::string::npos ? " >/dev/null 2>&1" : " 2>/dev/null";
      if (std::system(("\"" + tool + "\" " + cmd + sink).c_str()) != 0) {
        o.passed = false;
        o.detail += "'" + commands[c].first + "' failed; ";
      }
      for (const auto& suffix : commands[c].second) {
        std::ifstream in(base + suffix, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        contents[rep] += s.str() + '\0';
      }
    }
    files += static_cast<int>(commands[c].second.size());
    if (contents[0] != contents[1] || contents[0].size() <= commands[c].second.size()) {
      o.passed = false;
      o.detail += "'" + commands[c].first + "' differs; ";
    }
  }
  fs::remove_all(dir);
  if (o.passed) o.detail = std::to_string(commands.size()) + " commands, " + std::to_string(files) + " files identical";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <path to segcs executable>\n";
    return 2;
  }
  const std::string tool = argv[1];

  struct Criterion {
    int id;
    std::string name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "cyclic grouping partition", 5, cyclic_partition},
      {2, "congruence cross-correlation", 10, congruence_cross_correlation},
      {3, "determinant closed forms", 30, determinant_oracle},
      {4, "V(k) eigenstructure", 30, eigenvalue_lemma},
      {5, "capacity vs log2 det", 30, capacity_identity},
      {6, "example 1 optimum", 1, example_one},
      {7, "example 2 rate-distortion", 1, example_two},
      {8, "vanishing penalty", 1, vanishing_penalty},
      {9, "monte carlo covariance", 120, monte_carlo_covariance},
      {10, "subsample assembly", 10, assembly_equivalence},
      {11, "recovery improves with extension", 120, recovery_demonstration},
      {12, "cli reproducibility", 120, [&] { return reproducibility(tool); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds <= c.budget_s;
    const bool pass = o.passed && in_time;
    failures += pass ? 0 : 1;
    std::printf("[%s] %2d %-34s %7.2fs (budget %gs)  %s%s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), seconds,
                c.budget_s, o.detail.c_str(), in_time ? "" : "  OVER BUDGET");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
