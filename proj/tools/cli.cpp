#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "segcs/bounds.hpp"
#include "segcs/covariance.hpp"
#include "segcs/error.hpp"
#include "segcs/permgroup.hpp"
#include "segcs/recovery.hpp"
#include "segcs/sampler.hpp"
#include "segcs/verify.hpp"

namespace segcs::cli {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  std::ostringstream s;
  s.precision(std::numeric_limits<double>::max_digits10);
  s << v;
  return s.str();
}

/// `#`-prefixed provenance block written at the top of every output file.
/// The timestamp comes from SOURCE_DATE_EPOCH so reruns stay byte-identical.
struct Manifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> params;

  void add(std::string key, std::string value) { params.emplace_back(std::move(key), std::move(value)); }

  std::string render() const {
    const char* epoch = std::getenv("SOURCE_DATE_EPOCH");
    std::string s = "# tool: segcs " + std::string(kVersion) + "\n# command: " + command + "\n";
    s += "# timestamp: " + std::string(epoch && *epoch ? epoch : "unset") + "\n";
    for (const auto& [k, v] : params) s += "# " + k + ": " + v + "\n";
    return s;
  }
};

void add_seed(Manifest& m, std::uint64_t seed, bool defaulted) {
  m.add("seed", std::to_string(seed) + (defaulted ? " (default)" : ""));
}

/// Empty result means stdout.
std::string resolve_path(const std::string& flag, const std::string& default_name) {
  if (flag == "-") return {};
  if (!flag.empty()) return flag;
  if (const char* dir = std::getenv(kOutDirEnv); dir && *dir) return (fs::path(dir) / default_name).string();
  return {};
}

void write_file(const std::string& path, const std::string& content) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream file(p, std::ios::binary);
  if (!file) throw UsageError("cannot open '" + path + "' for writing");
  file << content;
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty()) {
    out << content;
  } else {
    write_file(path, content);
  }
}

std::vector<Rational> parse_alphas(const std::vector<std::string>& text) {
  std::vector<Rational> out;
  for (const auto& t : text) out.push_back(Rational::parse(t));
  return out;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// ---------------------------------------------------------------- bounds

struct BoundsArgs {
  int figure = 0;
  std::vector<double> gamma_db;
  std::vector<double> gamma;
  std::vector<std::string> alpha;
  int m_o = 3;
  std::vector<double> n;
  std::optional<double> rd;
  std::optional<double> sparsity_ratio;
  std::string out;
};

struct BoundRow {
  std::string case_tag;
  double gamma;
  std::string alpha;
  int m_o;
  double n;
  double rd;
  double capacity_ub;
  double delta_lb;
  double delta_o_lb;
};

BoundRow grid_row(double gamma, const Rational& alpha, int m_o, double n, double rd) {
  const BoundQuery q{gamma, alpha, m_o, n, rd, case_for(alpha)};
  const BoundResult r = evaluate(q);
  return {to_string(q.extension_case), gamma, alpha.to_string(), m_o, n, rd, r.capacity_ub, r.delta_lb, r.delta_o_lb};
}

std::string render_bounds(const Manifest& manifest, const std::vector<BoundRow>& rows) {
  std::ostringstream s;
  s.precision(std::numeric_limits<double>::max_digits10);
  s << manifest.render();
  s << "case,gamma_db,gamma,alpha,m_o,n,rd,capacity_ub,delta_lb,delta_o_lb\n";
  for (const auto& r : rows) {
    s << r.case_tag << ',' << 10.0 * std::log10(r.gamma) << ',' << r.gamma << ',' << r.alpha << ',' << r.m_o << ','
      << r.n << ',' << r.rd << ',' << r.capacity_ub << ',' << r.delta_lb << ',' << r.delta_o_lb << '\n';
  }
  return s.str();
}

std::vector<BoundRow> figure_rows(int figure, Manifest& manifest) {
  std::vector<BoundRow> rows;
  if (figure == 4 || figure == 5) {
    const double gamma = db_to_linear(20.0);
    const int m_o = 3;
    const double n = 100.0;
    const double rd = 0.2;
    manifest.add("preset", figure == 4 ? "capacity upper bound vs alpha" : "original sampling rate bound vs alpha");
    manifest.add("gamma_db", "20");
    manifest.add("m_o", "3");
    manifest.add("n", "100");
    manifest.add("rd", "0.2");
    manifest.add("rows", "case=single: admissible grid alpha = k/3; case=single_curve: alpha = i/100");
    for (int k = 0; k <= m_o; ++k) rows.push_back(grid_row(gamma, Rational(k, m_o), m_o, n, rd));
    for (int i = 0; i <= 100; ++i) {
      const double a = i / 100.0;
      rows.push_back({"single_curve", gamma, num(a), m_o, n, rd, capacity_ub_single_group(gamma, a, m_o),
                      delta_lb_single_group(rd, gamma, a, n), delta_o_lb_single_group(rd, gamma, a, n)});
    }
    const auto opt = optimal_alpha_single_group(gamma, m_o);
    manifest.add("stationary_alpha", num(opt.stationary_point));
    manifest.add("continuous_optimum", num(opt.continuous));
    manifest.add("discrete_optimum", opt.discrete.to_string());
    return rows;
  }
  if (figure == 6 || figure == 7 || figure == 8) {
    const double n = figure == 6 ? 1e5 : 1e7;
    const double rd = 0.0013;
    const int m_o = 7;
    manifest.add("preset", figure == 8 ? "original sampling rate bound vs SNR" : "sampling rate bound vs SNR");
    manifest.add("gamma_db", "0:1:30");
    manifest.add("alpha", "0,1,5");
    manifest.add("n", num(n));
    manifest.add("rd", "0.0013");
    manifest.add("m_o", "7 (smallest prime admitting alpha = 5; delta bounds do not depend on m_o)");
    for (const int a : {0, 1, 5}) {
      for (int db = 0; db <= 30; ++db) rows.push_back(grid_row(db_to_linear(db), Rational(a), m_o, n, rd));
    }
    return rows;
  }
  throw UsageError("--figure must be one of 4, 5, 6, 7, 8");
}

int cmd_bounds(const BoundsArgs& args, std::ostream& out) {
  Manifest manifest{"bounds", {}};
  std::vector<BoundRow> rows;
  if (args.figure != 0) {
    manifest.add("figure", std::to_string(args.figure));
    rows = figure_rows(args.figure, manifest);
  } else {
    std::vector<double> gammas;
    for (double db : args.gamma_db) gammas.push_back(db_to_linear(db));
    gammas.insert(gammas.end(), args.gamma.begin(), args.gamma.end());
    if (gammas.empty()) gammas.push_back(db_to_linear(20.0));
    const auto alphas = parse_alphas(args.alpha.empty() ? std::vector<std::string>{"0"} : args.alpha);
    const std::vector<double> ns = args.n.empty() ? std::vector<double>{100.0} : args.n;
    double rd = 0.2;
    if (args.rd && args.sparsity_ratio) throw UsageError("--rd and --sparsity-ratio are mutually exclusive");
    if (args.rd) rd = *args.rd;
    if (args.sparsity_ratio) rd = rate_distortion_sparse(*args.sparsity_ratio);

    manifest.add("m_o", std::to_string(args.m_o));
    manifest.add("rd", num(rd) + (args.sparsity_ratio ? " (from sparsity ratio " + num(*args.sparsity_ratio) + ")" : ""));
    for (const auto& a : alphas) check_extension_rate(case_for(a), args.m_o, a);
    for (const auto& a : alphas)
      for (double n : ns)
        for (double g : gammas) rows.push_back(grid_row(g, a, args.m_o, n, rd));
  }
  emit(resolve_path(args.out, "bounds.csv"), render_bounds(manifest, rows), out);
  return kSuccess;
}

// ---------------------------------------------------------------- groups

int cmd_groups(int m_o, std::optional<int> alpha, const std::string& out_flag, std::ostream& out) {
  Manifest manifest{"groups", {}};
  manifest.add("m_o", std::to_string(m_o));
  std::vector<SequenceGroup> groups;
  if (alpha) {
    manifest.add("construction", "congruence");
    manifest.add("alpha", std::to_string(*alpha));
    groups = congruence_groups(m_o, *alpha).groups;
  } else {
    manifest.add("construction", "cyclic");
    groups = cyclic_grouping(m_o);
  }
  std::ostringstream s;
  s << manifest.render();
  write_groups(s, groups);
  emit(resolve_path(out_flag, "groups.txt"), s.str(), out);
  return kSuccess;
}

// ---------------------------------------------------------------- matrix

struct MatrixArgs {
  int m_o = 3;
  int n = 12;
  std::string alpha = "1";
  std::string distribution = "gaussian";
  bool sample = false;
  double sigma_x2 = 1.0;
  std::string out;
};

int cmd_matrix(const MatrixArgs& args, std::uint64_t seed, bool seed_defaulted, std::ostream& out) {
  const Rational alpha = Rational::parse(args.alpha);
  MatrixSpec spec{args.m_o, args.n,
                  args.distribution == "rademacher" ? EntryDistribution::rademacher : EntryDistribution::gaussian, seed};
  const auto sequences = extension_sequences(args.m_o, alpha);
  const SamplingMatrix phi = generate(spec, sequences);

  Manifest manifest{"matrix", {}};
  manifest.add("m_o", std::to_string(args.m_o));
  manifest.add("n", std::to_string(args.n));
  manifest.add("alpha", alpha.to_string() + " (" + to_string(case_for(alpha)) + " group)");
  manifest.add("distribution", args.distribution);
  add_seed(manifest, seed, seed_defaulted);

  std::string base = args.out;
  if (base.empty() || base == "-") {
    const char* dir = std::getenv(kOutDirEnv);
    base = (fs::path(dir && *dir ? dir : ".") / "matrix").string();
  }

  std::ostringstream matrix_text;
  matrix_text << manifest.render();
  write_dense(matrix_text, phi.full());
  write_file(base + ".txt", matrix_text.str());

  std::ostringstream seq_text;
  seq_text << manifest.render() << "# extended-row sources, one row per line, 1-based BMI index per segment\n";
  for (const auto& s : phi.sequences()) seq_text << s.to_string() << '\n';
  write_file(base + ".sequences.txt", seq_text.str());
  out << "wrote " << base << ".txt (" << phi.rows() << "x" << phi.cols() << ")\n";
  out << "wrote " << base << ".sequences.txt (" << phi.m_e() << " extended rows)\n";

  if (args.sample) {
    Engine engine = make_engine(seed, Stream::signal);
    const Eigen::VectorXd x = draw_signal(SignalModel{IidGaussian{args.sigma_x2}, args.n}, engine);
    const SampleRecord record = sample(phi, x, derive_seed(seed, Stream::noise));
    std::ostringstream csv;
    Manifest sm = manifest;
    sm.add("signal", "iid gaussian, sigma_x2 = " + num(args.sigma_x2));
    csv << sm.render();
    write_samples_csv(csv, record);
    write_file(base + ".samples.csv", csv.str());
    out << "wrote " << base << ".samples.csv\n";
  }
  return kSuccess;
}

// ---------------------------------------------------------------- verify

// Multi-group checks factor (m_o^2 x m_o^2) matrices in long double.
constexpr int kVerifyCap = 13;

struct VerifyArgs {
  std::string suite;
  std::optional<int> m_o;
  std::optional<std::string> alpha;
  std::optional<double> gamma;
  bool small = false;
};

int cmd_verify(const VerifyArgs& args, std::ostream& out) {
  std::vector<int> sizes;
  if (args.m_o) {
    if (*args.m_o < 1 || *args.m_o > kVerifyCap) {
      throw Error(Errc::cap_exceeded, "verify supports 1 <= m_o <= " + std::to_string(kVerifyCap));
    }
    sizes.push_back(*args.m_o);
  } else {
    for (int m = 2; m <= (args.small ? 3 : 7); ++m) sizes.push_back(m);
  }
  const std::vector<double> variances = args.small ? std::vector<double>{1.0, 100.0}
                                                   : std::vector<double>{0.1, 1.0, 10.0, 100.0};
  const bool all = args.suite == "all";
  std::vector<CheckResult> checks;
  auto append = [&](std::vector<CheckResult> more) { checks.insert(checks.end(), more.begin(), more.end()); };

  if (all || args.suite == "groups") {
    for (int m : sizes) append(verify_groups(m));
  }
  if (all || args.suite == "covariance") {
    for (int m : sizes) append(verify_covariance(m, variances));
  }
  if (all || args.suite == "capacity") {
    if (args.alpha || args.gamma) {
      const std::vector<double> gammas = args.gamma ? std::vector<double>{*args.gamma} : variances;
      for (int m : sizes) {
        std::vector<Rational> alphas;
        if (args.alpha) {
          alphas.push_back(Rational::parse(*args.alpha));
        } else {
          for (int k = 0; k <= m; ++k) alphas.emplace_back(k, m);
          for (int a = 2; a <= m - 1; ++a) alphas.emplace_back(a);
        }
        for (const auto& a : alphas)
          for (double g : gammas) checks.push_back(verify_capacity(m, a, g));
      }
    } else {
      for (int m : sizes) {
        for (double g : variances) {
          for (int k = 0; k <= m; ++k) checks.push_back(verify_capacity(m, Rational(k, m), g));
          for (int a = 2; a <= m - 1; ++a) checks.push_back(verify_capacity(m, Rational(a), g));
        }
      }
    }
  }
  return print_report(out, checks) ? kSuccess : kVerificationFailed;
}

// ---------------------------------------------------------------- recover

struct RecoverArgs {
  int m_o = 32;
  int n = 256;
  int sparsity = 3;
  std::vector<std::string> alphas;
  long trials = 200;
  double gamma_db = 10.0;
  std::string solver = "omp";
  bool noiseless = false;
  std::string out;
};

int cmd_recover(const RecoverArgs& args, std::uint64_t seed, bool seed_defaulted, std::ostream& out) {
  const auto alphas = parse_alphas(args.alphas.empty() ? std::vector<std::string>{"0", "1"} : args.alphas);
  if (args.sparsity < 0 || args.sparsity > args.n) throw UsageError("--s must lie in 0..n");
  const double gamma = db_to_linear(args.gamma_db);
  // Per-sample SNR ||x||^2 / n equals gamma for s spikes of this amplitude.
  const double amplitude = args.sparsity > 0 ? std::sqrt(gamma * args.n / args.sparsity) : 0.0;

  RecoveryConfig config;
  config.solver = args.solver == "ista" ? Solver::ista : Solver::omp;
  config.sparsity = args.sparsity;
  config.trials = args.trials;
  config.seed = seed;
  config.noiseless = args.noiseless;
  const MatrixSpec base{args.m_o, args.n, EntryDistribution::gaussian, seed};
  const SignalModel signal{SparseSpikes{args.sparsity, amplitude}, args.n};
  const auto reports = mse_experiment(base, signal, alphas, config);

  Manifest manifest{"recover", {}};
  manifest.add("m_o", std::to_string(args.m_o));
  manifest.add("n", std::to_string(args.n));
  manifest.add("s", std::to_string(args.sparsity));
  std::string alpha_list;
  for (const auto& a : alphas) alpha_list += (alpha_list.empty() ? "" : ",") + a.to_string();
  manifest.add("alphas", alpha_list);
  manifest.add("trials", std::to_string(args.trials));
  manifest.add("gamma_db", num(args.gamma_db) + (args.noiseless ? " (noiseless)" : ""));
  manifest.add("spike_amplitude", num(amplitude));
  manifest.add("solver", args.solver);
  add_seed(manifest, seed, seed_defaulted);

  std::ostringstream csv;
  csv << manifest.render();
  write_distortion_csv(csv, reports);
  emit(resolve_path(args.out, "recover.csv"), csv.str(), out);
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Segmented compressive sampling: group constructions, covariance closed forms, capacity and "
               "sampling-rate bounds"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::uint64_t seed = kDefaultSeed;

  BoundsArgs bounds;
  auto* bounds_cmd = app.add_subcommand("bounds", "Capacity and sampling-rate bound sweeps as CSV");
  bounds_cmd->add_option("--figure", bounds.figure, "Preset grid: 4, 5, 6, 7 or 8")->check(CLI::IsMember({4, 5, 6, 7, 8}));
  auto* gdb = bounds_cmd->add_option("--gamma-db", bounds.gamma_db, "SNR values in dB (comma list)")->delimiter(',');
  bounds_cmd->add_option("--gamma", bounds.gamma, "Linear SNR values (comma list)")->delimiter(',')->excludes(gdb);
  bounds_cmd->add_option("--alpha", bounds.alpha, "Extension rates, e.g. 0,1/3,1,5")->delimiter(',');
  bounds_cmd->add_option("--m-o", bounds.m_o, "Number of BMIs")->check(CLI::PositiveNumber);
  bounds_cmd->add_option("--n", bounds.n, "Signal lengths (comma list)")->delimiter(',');
  auto* rd_opt = bounds_cmd->add_option("--rd", bounds.rd, "R(D) in bits per symbol");
  bounds_cmd->add_option("--sparsity-ratio", bounds.sparsity_ratio, "s/n; sets R(D) = (s/n) log2(n/s)")->excludes(rd_opt);
  bounds_cmd->add_option("--out", bounds.out, "Output file ('-' for stdout)");
  bounds_cmd->add_option("--seed", seed, "Unused; accepted for uniformity");

  int groups_m_o = 3;
  std::optional<int> groups_alpha;
  std::string groups_out;
  auto* groups_cmd = app.add_subcommand("groups", "Print sequence groups");
  groups_cmd->add_option("--m-o", groups_m_o, "Number of BMIs")->required();
  groups_cmd->add_option("--alpha", groups_alpha, "Number of congruence groups (prime m_o); omit for the full cyclic grouping");
  groups_cmd->add_option("--out", groups_out, "Output file ('-' for stdout)");

  MatrixArgs matrix;
  auto* matrix_cmd = app.add_subcommand("matrix", "Generate a segmented sampling matrix");
  matrix_cmd->add_option("--m-o", matrix.m_o, "Number of BMIs");
  matrix_cmd->add_option("--n", matrix.n, "Signal length (multiple of m_o)");
  matrix_cmd->add_option("--alpha", matrix.alpha, "Extension rate: k/m_o up to 1, or an integer group count");
  matrix_cmd->add_option("--distribution", matrix.distribution)->check(CLI::IsMember({"gaussian", "rademacher"}));
  matrix_cmd->add_flag("--sample", matrix.sample, "Also write samples of an i.i.d. Gaussian signal");
  matrix_cmd->add_option("--sigma-x2", matrix.sigma_x2, "Signal variance for --sample");
  matrix_cmd->add_option("--out", matrix.out, "Output base path (writes <base>.txt, <base>.sequences.txt)");
  auto* matrix_seed = matrix_cmd->add_option("--seed", seed, "Root RNG seed");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Check closed forms against brute-force and numeric oracles");
  verify_cmd->add_option("suite", verify.suite, "groups | covariance | capacity | all")
      ->required()
      ->check(CLI::IsMember({"groups", "covariance", "capacity", "all"}));
  verify_cmd->add_option("--m-o", verify.m_o, "Restrict to one m_o");
  verify_cmd->add_option("--alpha", verify.alpha, "Restrict capacity checks to one extension rate");
  verify_cmd->add_option("--gamma", verify.gamma, "Restrict capacity checks to one linear SNR");
  verify_cmd->add_flag("--small", verify.small, "Minimal sizes");

  RecoverArgs recover;
  auto* recover_cmd = app.add_subcommand("recover", "Sparse-recovery distortion experiment");
  recover_cmd->add_option("--m-o", recover.m_o, "Number of BMIs");
  recover_cmd->add_option("--n", recover.n, "Signal length");
  recover_cmd->add_option("--s", recover.sparsity, "Number of spikes");
  recover_cmd->add_option("--alpha,--alphas", recover.alphas, "Extension rates to compare")->delimiter(',');
  recover_cmd->add_option("--trials", recover.trials, "Paired trials")->check(CLI::PositiveNumber);
  recover_cmd->add_option("--gamma-db", recover.gamma_db, "Per-sample SNR of the spike signal in dB");
  recover_cmd->add_option("--solver", recover.solver)->check(CLI::IsMember({"omp", "ista"}));
  recover_cmd->add_flag("--noiseless", recover.noiseless);
  recover_cmd->add_option("--out", recover.out, "Output file ('-' for stdout)");
  auto* recover_seed = recover_cmd->add_option("--seed", seed, "Root RNG seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (bounds_cmd->parsed()) return cmd_bounds(bounds, out);
    if (groups_cmd->parsed()) return cmd_groups(groups_m_o, groups_alpha, groups_out, out);
    if (matrix_cmd->parsed()) return cmd_matrix(matrix, seed, matrix_seed->count() == 0, out);
    if (verify_cmd->parsed()) return cmd_verify(verify, out);
    if (recover_cmd->parsed()) return cmd_recover(recover, seed, recover_seed->count() == 0, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace segcs::cli
