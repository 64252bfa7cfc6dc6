#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "segcs/permgroup.hpp"
#include "segcs/rational.hpp"
#include "segcs/rng.hpp"

namespace segcs {

enum class EntryDistribution { gaussian, rademacher };

struct MatrixSpec {
  int m_o = 1;
  int n = 1;
  EntryDistribution distribution = EntryDistribution::gaussian;
  std::uint64_t seed = 0;

  int segment_length() const { return n / m_o; }
  /// Throws Errc::domain or Errc::divisibility.
  void validate() const;
};

/// Phi = [Phi_o; Phi_e] with the permutation sequence behind each extended row.
class SamplingMatrix {
 public:
  SamplingMatrix(MatrixSpec spec, Eigen::MatrixXd phi_o, Eigen::MatrixXd phi_e,
                 std::vector<PermutationSequence> sequences);

  const MatrixSpec& spec() const noexcept { return spec_; }
  const Eigen::MatrixXd& original() const noexcept { return phi_o_; }
  const Eigen::MatrixXd& extended() const noexcept { return phi_e_; }
  const std::vector<PermutationSequence>& sequences() const noexcept { return sequences_; }

  int m_o() const noexcept { return spec_.m_o; }
  int m_e() const noexcept { return static_cast<int>(phi_e_.rows()); }
  int rows() const noexcept { return m_o() + m_e(); }
  int cols() const noexcept { return spec_.n; }
  int segment_length() const noexcept { return spec_.segment_length(); }

  /// Stacked m x n matrix.
  Eigen::MatrixXd full() const;

 private:
  MatrixSpec spec_;
  Eigen::MatrixXd phi_o_;
  Eigen::MatrixXd phi_e_;
  std::vector<PermutationSequence> sequences_;
};

/// Draws Phi_o (entries of variance 1/n) and assembles one extended row per
/// sequence by copying segment k from original row sequence[k].
SamplingMatrix generate(const MatrixSpec& spec, std::span<const PermutationSequence> sequences);

/// Extended-row sequences for extension rate `alpha` with m_o BMIs:
/// alpha <= 1 takes the first alpha*m_o members of the cyclic group of (1, ..., m_o);
/// integer alpha > 1 takes every member of congruence_groups(m_o, alpha).
std::vector<PermutationSequence> extension_sequences(int m_o, const Rational& alpha);

struct IidGaussian {
  double sigma_x2 = 1.0;
};

/// Exactly `sparsity` entries of magnitude `amplitude` with random signs at uniform positions.
struct SparseSpikes {
  int sparsity = 1;
  double amplitude = 1.0;
};

struct SignalModel {
  std::variant<IidGaussian, SparseSpikes> kind;
  int n = 1;
};

Eigen::VectorXd draw_signal(const SignalModel& model, Engine& engine);

struct SampleRecord {
  Eigen::VectorXd w;
  Eigen::VectorXd y;
  std::uint64_t z_seed = 0;
};

/// w = Phi x, y = w + z with z i.i.d. N(0, 1) drawn from `noise_seed`.
SampleRecord sample(const SamplingMatrix& matrix, const Eigen::VectorXd& x, std::uint64_t noise_seed);

/// Computes w the way a segmented converter does: every BMI emits m_o sub-samples
/// (one per segment) and each sample is a sum of m_o sub-samples.
Eigen::VectorXd accumulate_subsamples(const SamplingMatrix& matrix, const Eigen::VectorXd& x);

struct CovarianceEstimate {
  Eigen::MatrixXd mean;        ///< sample mean of w_i w_j
  Eigen::MatrixXd std_error;   ///< standard error of each mean
  long trials = 0;
};

/// Monte Carlo estimate of E[w w^T] over fresh matrix and signal draws.
/// The result does not depend on thread count or scheduling.
CovarianceEstimate empirical_covariance(const MatrixSpec& spec, std::span<const PermutationSequence> sequences,
                                        const SignalModel& signal, long trials, std::uint64_t seed);

/// Dense text format: "# dense <rows> <cols>" then one space-separated row per line.
void write_dense(std::ostream& out, const Eigen::MatrixXd& matrix);
Eigen::MatrixXd read_dense(std::istream& in);

/// CSV with columns index,w,y.
void write_samples_csv(std::ostream& out, const SampleRecord& record);

}  // namespace segcs
