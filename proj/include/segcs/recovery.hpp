#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "segcs/rational.hpp"
#include "segcs/sampler.hpp"

namespace segcs {

enum class Solver { omp, ista };

struct RecoveryConfig {
  Solver solver = Solver::omp;
  int sparsity = 1;
  /// ISTA iteration budget (shared by all continuation stages) and stopping
  /// tolerance on the relative iterate change.
  int ista_iterations = 5000;
  double ista_tolerance = 1e-6;
  /// ISTA l1 weight; <= 0 selects noise_sigma * sqrt(2 ln n) * (mean column norm).
  double ista_lambda = 0.0;
  double noise_sigma = 1.0;
  int power_iterations = 50;
  bool noiseless = false;
  long trials = 1;
  std::uint64_t seed = 0;
};

enum class RecoveryStatus { ok, not_converged, singular };

const char* to_string(RecoveryStatus status) noexcept;

struct RecoveryResult {
  Eigen::VectorXd x_hat;
  std::vector<Eigen::Index> support;
  RecoveryStatus status = RecoveryStatus::ok;
  int iterations = 0;
};

/// Greedy support selection on normalized columns, least squares on the selected support.
RecoveryResult omp(const Eigen::MatrixXd& phi, const Eigen::VectorXd& y, int sparsity);

/// Iterative soft thresholding with step 1/L, L estimated by power iteration on phi^T phi.
RecoveryResult ista(const Eigen::MatrixXd& phi, const Eigen::VectorXd& y, const RecoveryConfig& config);

RecoveryResult recover(const Eigen::VectorXd& y, const SamplingMatrix& matrix, const RecoveryConfig& config);

/// Largest eigenvalue of phi^T phi by power iteration from the all-ones vector.
double squared_spectral_norm(const Eigen::MatrixXd& phi, int iterations);

/// (1/n) sum_i (x_i - x_hat_i)^2.
double distortion(const Eigen::VectorXd& x, const Eigen::VectorXd& x_hat);

struct DistortionReport {
  Rational alpha;
  std::vector<double> distortions;
  std::vector<bool> converged;
  double mean = 0.0;
  double std_error = 0.0;
  long failures = 0;
};

/// Paired comparison across extension rates: per trial every alpha sees the same
/// signal, the same Phi_o and the same noise on the original rows; extended rows
/// get their own noise.
std::vector<DistortionReport> mse_experiment(const MatrixSpec& base, const SignalModel& signal,
                                             std::span<const Rational> alphas, const RecoveryConfig& config);

/// Rows alpha,trial,distortion,converged followed by one summary row per alpha.
void write_distortion_csv(std::ostream& out, std::span<const DistortionReport> reports);

}  // namespace segcs
