#include "segcs/recovery.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "segcs/error.hpp"
#include "segcs/rng.hpp"

namespace segcs {

namespace {

constexpr double kContinuationFactor = 0.2;

}  // namespace

const char* to_string(RecoveryStatus status) noexcept {
  switch (status) {
    case RecoveryStatus::ok: return "ok";
    case RecoveryStatus::not_converged: return "not_converged";
    case RecoveryStatus::singular: return "singular";
  }
  return "unknown";
}

double distortion(const Eigen::VectorXd& x, const Eigen::VectorXd& x_hat) {
  if (x.size() != x_hat.size() || x.size() == 0) throw Error(Errc::dimension_mismatch, "distortion needs equal, non-empty lengths");
  return (x - x_hat).squaredNorm() / static_cast<double>(x.size());
}

RecoveryResult omp(const Eigen::MatrixXd& phi, const Eigen::VectorXd& y, int sparsity) {
  if (y.size() != phi.rows()) throw Error(Errc::dimension_mismatch, "y length does not match the matrix rows");
  if (sparsity < 0) throw Error(Errc::domain, "sparsity must be >= 0");
  RecoveryResult result;
  result.x_hat = Eigen::VectorXd::Zero(phi.cols());
  const Eigen::VectorXd norms = phi.colwise().norm().transpose();
  const double stop = 1e-12 * std::max(1.0, y.norm());
  const auto budget = std::min<Eigen::Index>(sparsity, std::min(phi.rows(), phi.cols()));

  Eigen::VectorXd residual = y;
  Eigen::VectorXd coef;
  std::vector<bool> chosen(static_cast<std::size_t>(phi.cols()), false);
  while (static_cast<Eigen::Index>(result.support.size()) < budget && residual.norm() > stop) {
    const Eigen::VectorXd corr = phi.transpose() * residual;
    Eigen::Index best = -1;
    double best_score = -1.0;
    for (Eigen::Index j = 0; j < phi.cols(); ++j) {
      if (chosen[static_cast<std::size_t>(j)] || norms(j) == 0.0) continue;
      const double score = std::fabs(corr(j)) / norms(j);
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    if (best < 0) break;
    chosen[static_cast<std::size_t>(best)] = true;
    result.support.push_back(best);
    ++result.iterations;

    const Eigen::MatrixXd active = phi(Eigen::all, result.support);
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(active);
    if (qr.rank() < active.cols()) {
      result.support.pop_back();
      result.status = RecoveryStatus::singular;
      break;
    }
    coef = qr.solve(y);
    residual = y - active * coef;
  }
  for (std::size_t i = 0; i < result.support.size(); ++i) result.x_hat(result.support[i]) = coef(static_cast<Eigen::Index>(i));
  return result;
}

double squared_spectral_norm(const Eigen::MatrixXd& phi, int iterations) {
  if (phi.size() == 0) return 0.0;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(phi.cols()).normalized();
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const Eigen::VectorXd u = phi.transpose() * (phi * v);
    lambda = u.norm();
    if (lambda == 0.0) return 0.0;
    v = u / lambda;
  }
  return lambda;
}

RecoveryResult ista(const Eigen::MatrixXd& phi, const Eigen::VectorXd& y, const RecoveryConfig& config) {
  if (y.size() != phi.rows()) throw Error(Errc::dimension_mismatch, "y length does not match the matrix rows");
  RecoveryResult result;
  result.x_hat = Eigen::VectorXd::Zero(phi.cols());
  const double lipschitz = squared_spectral_norm(phi, config.power_iterations);
  if (lipschitz == 0.0) return result;

  double lambda = config.ista_lambda;
  if (lambda <= 0.0) {
    if (config.noiseless) {
      lambda = 1e-4 * (phi.transpose() * y).cwiseAbs().maxCoeff();
    } else {
      const double mean_norm = phi.colwise().norm().mean();
      lambda = config.noise_sigma * std::sqrt(2.0 * std::log(static_cast<double>(phi.cols()))) * mean_norm;
    }
  }
  const double step = 1.0 / lipschitz;
  // Continuation: start at the weight where x = 0 is optimal, converge, then
  // shrink toward lambda with warm starts. The budget covers all stages.
  double current = std::max(lambda, (phi.transpose() * y).cwiseAbs().maxCoeff());

  Eigen::VectorXd& x = result.x_hat;
  result.status = RecoveryStatus::not_converged;
  for (int it = 0; it < config.ista_iterations; ++it) {
    const double threshold = current * step;
    const Eigen::VectorXd z = x + step * (phi.transpose() * (y - phi * x));
    const Eigen::VectorXd next = z.unaryExpr([threshold](double v) {
      return v > threshold ? v - threshold : (v < -threshold ? v + threshold : 0.0);
    });
    const double change = (next - x).norm();
    x = next;
    result.iterations = it + 1;
    if (change > config.ista_tolerance * std::max(1.0, x.norm())) continue;
    if (current <= lambda) {
      result.status = RecoveryStatus::ok;
      break;
    }
    current = std::max(lambda, current * kContinuationFactor);
  }
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (x(j) != 0.0) result.support.push_back(j);
  }
  return result;
}

RecoveryResult recover(const Eigen::VectorXd& y, const SamplingMatrix& matrix, const RecoveryConfig& config) {
  if (y.size() != matrix.rows()) throw Error(Errc::dimension_mismatch, "y length does not match the matrix rows");
  const Eigen::MatrixXd phi = matrix.full();
  return config.solver == Solver::omp ? omp(phi, y, config.sparsity) : ista(phi, y, config);
}

std::vector<DistortionReport> mse_experiment(const MatrixSpec& base, const SignalModel& signal,
                                             std::span<const Rational> alphas, const RecoveryConfig& config) {
  base.validate();
  if (signal.n != base.n) throw Error(Errc::dimension_mismatch, "signal length does not match n");
  if (config.trials < 1) throw Error(Errc::domain, "trials must be >= 1");
  if (config.sparsity < 0) throw Error(Errc::domain, "sparsity must be >= 0");

  std::vector<std::vector<PermutationSequence>> sequences;
  std::vector<DistortionReport> reports;
  for (const auto& a : alphas) {
    sequences.push_back(extension_sequences(base.m_o, a));
    reports.push_back(DistortionReport{a, {}, {}, 0.0, 0.0, 0});
  }

  for (long t = 0; t < config.trials; ++t) {
    const auto trial_seed = derive_seed(config.seed, Stream::trial, static_cast<std::uint64_t>(t));
    MatrixSpec spec = base;
    spec.seed = trial_seed;
    Engine signal_engine = make_engine(trial_seed, Stream::signal);
    const Eigen::VectorXd x = draw_signal(signal, signal_engine);

    Engine noise_engine = make_engine(trial_seed, Stream::noise);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd original_noise(base.m_o);
    for (Eigen::Index i = 0; i < original_noise.size(); ++i) original_noise(i) = config.noise_sigma * normal(noise_engine);

    for (std::size_t a = 0; a < alphas.size(); ++a) {
      // Phi_o depends only on spec.seed, so every arm shares it.
      const SamplingMatrix phi = generate(spec, sequences[a]);
      Eigen::VectorXd y(phi.rows());
      y << phi.original() * x, phi.extended() * x;
      if (!config.noiseless) {
        Engine extra = make_engine(trial_seed, Stream::extension_noise, a);
        y.head(base.m_o) += original_noise;
        for (Eigen::Index i = base.m_o; i < y.size(); ++i) y(i) += config.noise_sigma * normal(extra);
      }
      const RecoveryResult r = recover(y, phi, config);
      reports[a].distortions.push_back(distortion(x, r.x_hat));
      reports[a].converged.push_back(r.status == RecoveryStatus::ok);
      if (r.status != RecoveryStatus::ok) ++reports[a].failures;
    }
  }

  for (auto& r : reports) {
    const double count = static_cast<double>(r.distortions.size());
    r.mean = std::accumulate(r.distortions.begin(), r.distortions.end(), 0.0) / count;
    if (r.distortions.size() < 2) {
      r.std_error = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    double ss = 0.0;
    for (double d : r.distortions) ss += (d - r.mean) * (d - r.mean);
    r.std_error = std::sqrt(ss / (count - 1.0) / count);
  }
  return reports;
}

void write_distortion_csv(std::ostream& out, std::span<const DistortionReport> reports) {
  std::ostringstream buffer;
  buffer.precision(std::numeric_limits<double>::max_digits10);
  buffer << "alpha,trial,distortion,converged\n";
  for (const auto& r : reports) {
    for (std::size_t t = 0; t < r.distortions.size(); ++t) {
      buffer << r.alpha.to_string() << ',' << t << ',' << r.distortions[t] << ',' << (r.converged[t] ? 1 : 0) << '\n';
    }
  }
  // Summary rows: trial column names the statistic, converged column holds the converged-trial count.
  for (const auto& r : reports) {
    const long converged = static_cast<long>(r.distortions.size()) - r.failures;
    buffer << r.alpha.to_string() << ",mean," << r.mean << ',' << converged << '\n';
    buffer << r.alpha.to_string() << ",std_error," << r.std_error << ',' << converged << '\n';
  }
  out << buffer.str();
}

}  // namespace segcs
