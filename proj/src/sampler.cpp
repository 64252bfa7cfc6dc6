#include "segcs/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "segcs/error.hpp"

namespace segcs {

void MatrixSpec::validate() const {
  if (m_o < 1) throw Error(Errc::domain, "m_o must be >= 1");
  if (n < m_o) throw Error(Errc::domain, "n must be >= m_o");
  if (n % m_o != 0) {
    throw Error(Errc::divisibility,
                "segment length n/m_o must be an integer (n = " + std::to_string(n) + ", m_o = " + std::to_string(m_o) + ")");
  }
}

SamplingMatrix::SamplingMatrix(MatrixSpec spec, Eigen::MatrixXd phi_o, Eigen::MatrixXd phi_e,
                               std::vector<PermutationSequence> sequences)
    : spec_(spec), phi_o_(std::move(phi_o)), phi_e_(std::move(phi_e)), sequences_(std::move(sequences)) {
  spec_.validate();
  if (phi_o_.rows() != spec_.m_o || phi_o_.cols() != spec_.n || phi_e_.cols() != spec_.n ||
      phi_e_.rows() != static_cast<Eigen::Index>(sequences_.size())) {
    throw Error(Errc::dimension_mismatch, "matrix blocks do not match the matrix spec and sequence count");
  }
}

Eigen::MatrixXd SamplingMatrix::full() const {
  Eigen::MatrixXd phi(rows(), cols());
  phi << phi_o_, phi_e_;
  return phi;
}

namespace {

void check_sequences(const MatrixSpec& spec, std::span<const PermutationSequence> sequences) {
  std::set<PermutationSequence> seen;
  for (const auto& s : sequences) {
    if (s.m_o() != spec.m_o) {
      throw Error(Errc::dimension_mismatch, "sequence " + s.to_string() + " does not have m_o = " + std::to_string(spec.m_o));
    }
    if (!seen.insert(s).second) throw Error(Errc::duplicate_sequence, "sequence " + s.to_string() + " repeated");
  }
}

Eigen::MatrixXd draw_original(const MatrixSpec& spec) {
  Engine engine = make_engine(spec.seed, Stream::matrix);
  Eigen::MatrixXd phi(spec.m_o, spec.n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(spec.n));
  // Row-major fill order so a row's values do not depend on m_o.
  if (spec.distribution == EntryDistribution::gaussian) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index i = 0; i < phi.rows(); ++i)
      for (Eigen::Index j = 0; j < phi.cols(); ++j) phi(i, j) = scale * normal(engine);
  } else {
    std::bernoulli_distribution coin(0.5);
    for (Eigen::Index i = 0; i < phi.rows(); ++i)
      for (Eigen::Index j = 0; j < phi.cols(); ++j) phi(i, j) = coin(engine) ? scale : -scale;
  }
  return phi;
}

Eigen::MatrixXd assemble_extended(const Eigen::MatrixXd& phi_o, int segment_length,
                                  std::span<const PermutationSequence> sequences) {
  Eigen::MatrixXd phi_e(static_cast<Eigen::Index>(sequences.size()), phi_o.cols());
  for (std::size_t r = 0; r < sequences.size(); ++r) {
    const auto& s = sequences[r];
    for (int k = 0; k < s.m_o(); ++k) {
      const Eigen::Index start = static_cast<Eigen::Index>(k) * segment_length;
      phi_e.row(static_cast<Eigen::Index>(r)).segment(start, segment_length) =
          phi_o.row(s[static_cast<std::size_t>(k)] - 1).segment(start, segment_length);
    }
  }
  return phi_e;
}

}  // namespace

SamplingMatrix generate(const MatrixSpec& spec, std::span<const PermutationSequence> sequences) {
  spec.validate();
  check_sequences(spec, sequences);
  Eigen::MatrixXd phi_o = draw_original(spec);
  Eigen::MatrixXd phi_e = assemble_extended(phi_o, spec.segment_length(), sequences);
  return SamplingMatrix(spec, std::move(phi_o), std::move(phi_e), {sequences.begin(), sequences.end()});
}

std::vector<PermutationSequence> extension_sequences(int m_o, const Rational& alpha) {
  if (m_o < 1) throw Error(Errc::domain, "m_o must be >= 1");
  if (alpha <= Rational(1)) {
    const Rational rows = alpha * Rational(m_o);
    if (alpha < Rational(0) || !rows.is_integer()) {
      throw Error(Errc::alpha_out_of_range, "single-group alpha must be a multiple of 1/m_o in [0, 1], got " +
                                                alpha.to_string());
    }
    if (rows.num() == 0) return {};
    auto group = cyclic_shift_group(PermutationSequence::identity(m_o));
    group.members.erase(group.members.begin() + rows.num(), group.members.end());
    return group.members;
  }
  if (!alpha.is_integer()) {
    throw Error(Errc::alpha_out_of_range, "alpha above 1 must be an integer number of groups, got " + alpha.to_string());
  }
  return congruence_groups(m_o, static_cast<int>(alpha.num())).all_sequences();
}

Eigen::VectorXd draw_signal(const SignalModel& model, Engine& engine) {
  if (model.n < 1) throw Error(Errc::domain, "signal length must be >= 1");
  Eigen::VectorXd x = Eigen::VectorXd::Zero(model.n);
  if (const auto* g = std::get_if<IidGaussian>(&model.kind)) {
    if (!(g->sigma_x2 >= 0.0)) throw Error(Errc::domain, "signal variance must be >= 0");
    if (g->sigma_x2 == 0.0) return x;
    std::normal_distribution<double> normal(0.0, std::sqrt(g->sigma_x2));
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = normal(engine);
    return x;
  }
  const auto& spikes = std::get<SparseSpikes>(model.kind);
  if (spikes.sparsity < 0 || spikes.sparsity > model.n) throw Error(Errc::domain, "sparsity must lie in 0..n");
  // Partial Fisher-Yates: the first `sparsity` slots are a uniform random subset.
  std::vector<int> index(static_cast<std::size_t>(model.n));
  std::iota(index.begin(), index.end(), 0);
  std::bernoulli_distribution sign(0.5);
  for (int i = 0; i < spikes.sparsity; ++i) {
    std::uniform_int_distribution<int> pick(i, model.n - 1);
    std::swap(index[static_cast<std::size_t>(i)], index[static_cast<std::size_t>(pick(engine))]);
    x(index[static_cast<std::size_t>(i)]) = sign(engine) ? spikes.amplitude : -spikes.amplitude;
  }
  return x;
}

SampleRecord sample(const SamplingMatrix& matrix, const Eigen::VectorXd& x, std::uint64_t noise_seed) {
  if (x.size() != matrix.cols()) throw Error(Errc::dimension_mismatch, "signal length does not match n");
  SampleRecord record;
  record.w.resize(matrix.rows());
  record.w << matrix.original() * x, matrix.extended() * x;
  Engine engine(noise_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  record.y = record.w;
  for (Eigen::Index i = 0; i < record.y.size(); ++i) record.y(i) += normal(engine);
  record.z_seed = noise_seed;
  return record;
}

Eigen::VectorXd accumulate_subsamples(const SamplingMatrix& matrix, const Eigen::VectorXd& x) {
  if (x.size() != matrix.cols()) throw Error(Errc::dimension_mismatch, "signal length does not match n");
  const int m_o = matrix.m_o();
  const int l = matrix.segment_length();
  // sub(b, k): integral of BMI b over sub-period k.
  Eigen::MatrixXd sub(m_o, m_o);
  for (int b = 0; b < m_o; ++b) {
    for (int k = 0; k < m_o; ++k) {
      sub(b, k) = matrix.original().row(b).segment(static_cast<Eigen::Index>(k) * l, l).dot(
          x.segment(static_cast<Eigen::Index>(k) * l, l));
    }
  }
  Eigen::VectorXd w(matrix.rows());
  w.head(m_o) = sub.rowwise().sum();
  for (int r = 0; r < matrix.m_e(); ++r) {
    const auto& s = matrix.sequences()[static_cast<std::size_t>(r)];
    double acc = 0.0;
    for (int k = 0; k < m_o; ++k) acc += sub(s[static_cast<std::size_t>(k)] - 1, k);
    w(m_o + r) = acc;
  }
  return w;
}

namespace {

constexpr long kChunkTrials = 4096;

struct Moments {
  Eigen::MatrixXd sum;
  Eigen::MatrixXd sum_sq;
};

Moments run_chunk(const MatrixSpec& spec, std::span<const PermutationSequence> sequences, const SignalModel& signal,
                  std::uint64_t seed, long first, long last) {
  const auto m = spec.m_o + static_cast<Eigen::Index>(sequences.size());
  Moments acc{Eigen::MatrixXd::Zero(m, m), Eigen::MatrixXd::Zero(m, m)};
  for (long t = first; t < last; ++t) {
    const auto trial_seed = derive_seed(seed, Stream::trial, static_cast<std::uint64_t>(t));
    MatrixSpec trial_spec = spec;
    trial_spec.seed = trial_seed;
    const SamplingMatrix phi = generate(trial_spec, sequences);
    Engine signal_engine = make_engine(trial_seed, Stream::signal);
    const Eigen::VectorXd x = draw_signal(signal, signal_engine);
    Eigen::VectorXd w(m);
    w << phi.original() * x, phi.extended() * x;
    const Eigen::MatrixXd outer = w * w.transpose();
    acc.sum += outer;
    acc.sum_sq += outer.cwiseProduct(outer);
  }
  return acc;
}

}  // namespace

CovarianceEstimate empirical_covariance(const MatrixSpec& spec, std::span<const PermutationSequence> sequences,
                                        const SignalModel& signal, long trials, std::uint64_t seed) {
  spec.validate();
  check_sequences(spec, sequences);
  if (trials < 2) throw Error(Errc::domain, "empirical covariance needs at least 2 trials");
  if (signal.n != spec.n) throw Error(Errc::dimension_mismatch, "signal length does not match n");

  // Fixed chunk boundaries and an in-order reduction keep the result
  // independent of how chunks are scheduled across threads.
  const long chunks = (trials + kChunkTrials - 1) / kChunkTrials;
  std::vector<Moments> partial(static_cast<std::size_t>(chunks));
  const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), static_cast<unsigned>(chunks)));
  auto work = [&](unsigned worker) {
    for (long c = worker; c < chunks; c += workers) {
      partial[static_cast<std::size_t>(c)] =
          run_chunk(spec, sequences, signal, seed, c * kChunkTrials, std::min(trials, (c + 1) * kChunkTrials));
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  const auto m = spec.m_o + static_cast<Eigen::Index>(sequences.size());
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(m, m);
  Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(m, m);
  for (const auto& p : partial) {
    sum += p.sum;
    sum_sq += p.sum_sq;
  }
  const double count = static_cast<double>(trials);
  CovarianceEstimate est;
  est.trials = trials;
  est.mean = sum / count;
  const Eigen::MatrixXd variance =
      ((sum_sq - sum.cwiseProduct(sum) / count) / (count - 1.0)).cwiseMax(0.0);
  est.std_error = (variance / count).cwiseSqrt();
  return est;
}

void write_dense(std::ostream& out, const Eigen::MatrixXd& matrix) {
  std::ostringstream buffer;
  buffer.precision(std::numeric_limits<double>::max_digits10);
  buffer << "# dense " << matrix.rows() << ' ' << matrix.cols() << '\n';
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      if (j) buffer << ' ';
      buffer << matrix(i, j);
    }
    buffer << '\n';
  }
  out << buffer.str();
}

Eigen::MatrixXd read_dense(std::istream& in) {
  std::string line;
  Eigen::Index rows = -1;
  Eigen::Index cols = -1;
  while (std::getline(in, line)) {
    if (line.rfind("# dense ", 0) == 0) {
      std::istringstream header(line.substr(8));
      if (!(header >> rows >> cols) || rows < 0 || cols < 0) throw Error(Errc::parse, "bad header: " + line);
      break;
    }
    if (!line.empty() && line.front() != '#') break;
  }
  if (rows < 0) throw Error(Errc::parse, "missing '# dense <rows> <cols>' header");
  Eigen::MatrixXd matrix(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (!(in >> matrix(i, j))) throw Error(Errc::parse, "dense matrix body is truncated");
    }
  }
  return matrix;
}

void write_samples_csv(std::ostream& out, const SampleRecord& record) {
  std::ostringstream buffer;
  buffer.precision(std::numeric_limits<double>::max_digits10);
  buffer << "index,w,y\n";
  for (Eigen::Index i = 0; i < record.w.size(); ++i) buffer << i + 1 << ',' << record.w(i) << ',' << record.y(i) << '\n';
  out << buffer.str();
}

}  // namespace segcs
