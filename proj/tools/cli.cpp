// Copyright 2026 The cluemark Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "cluemark/attacks.hpp"
#include "cluemark/error.hpp"
#include "cluemark/evaluation.hpp"
#include "cluemark/key_io.hpp"
#include "cluemark/npy.hpp"
#include "cluemark/random.hpp"
#include "cluemark/stats.hpp"
#include "cluemark/watermark.hpp"

namespace cluemark::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::optional<double> threshold;
  bool force = false;
};

std::uint64_t resolve_seed(const GlobalOptions& global) {
  if (global.seed) {
    return *global.seed;
  }
  std::random_device device;
  return (static_cast<std::uint64_t>(device()) << 32) ^ device();
}

void ensure_writable(const fs::path& path, const GlobalOptions& global) {
  if (fs::exists(path) && !global.force) {
    throw UsageError("refusing to overwrite " + path.string() +
                     " (pass --force)");
  }
}

void ensure_directory(const fs::path& dir) {
  if (!fs::exists(dir)) {
    fs::create_directories(dir);
  } else if (!fs::is_directory(dir)) {
    throw UsageError(dir.string() + " is not a directory");
  }
}

std::ofstream open_output(const fs::path& path, const GlobalOptions& global) {
  ensure_writable(path, global);
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  return out;
}

TensorDims to_dims(const std::vector<std::size_t>& v, const char* what) {
  if (v.size() != 3) {
    throw UsageError(std::string(what) + " needs three comma-separated integers");
  }
  return {v[0], v[1], v[2]};
}

BlockShape to_block(const std::vector<std::size_t>& v) {
  if (v.size() != 3) {
    throw UsageError("--block needs three comma-separated integers");
  }
  return {v[0], v[1], v[2]};
}

std::string pair_name(const char* prefix, std::size_t i) {
  std::ostringstream name;
  name << prefix << '_' << std::setw(4) << std::setfill('0') << i << ".npy";
  return name.str();
}

nlohmann::json report_json(const DetectionReport& report) {
  nlohmann::json j;
  j["m_samples"] = report.m_samples;
  j["mean_resultant"] = report.mean_resultant;
  j["statistic"] = report.statistic;
  j["p_value"] = report.p_value;
  j["log_p_value"] = report.log_p_value;
  j["threshold"] = report.threshold;
  j["decision"] = report.decision;
  return j;
}

// ---------------------------------------------------------------- keygen

struct KeygenOptions {
  fs::path out;
  double gamma = 2.0;
  double beta = 0.001;
  std::vector<std::size_t> block{2, 4, 4};
  std::vector<std::size_t> dims{4, 64, 64};
};

int run_keygen(const KeygenOptions& opt, const GlobalOptions& global,
               std::ostream& out) {
  const BlockShape block = to_block(opt.block);
  const TensorDims dims = to_dims(opt.dims, "--dims");
  const double threshold = global.threshold.value_or(kDefaultThreshold);
  ensure_writable(opt.out, global);
  RandomStream rng(resolve_seed(global));
  const SecretKey key =
      setup(rng, ClweParams{block.volume(), opt.gamma, opt.beta}, block, dims);
  write_key(KeyFile{key, threshold}, opt.out);
  out << "key=" << opt.out.string() << "\n";
  out << "n=" << key.params.n << "\n";
  out << "samples_per_latent=" << dims.volume() / block.volume() << "\n";
  return 0;
}

// ------------------------------------------------------------------ mark

struct MarkOptions {
  fs::path key;
  fs::path in;
  fs::path out;
  fs::path unmarked_out;
  std::string dtype = "f8";
};

NpyDtype to_dtype(const std::string& name) {
  return name == "f4" ? NpyDtype::Float32 : NpyDtype::Float64;
}

int run_mark(const MarkOptions& opt, const GlobalOptions& global,
             std::ostream& out) {
  const KeyFile key_file = read_key(opt.key);
  const SecretKey& key = key_file.key;
  ensure_writable(opt.out, global);
  if (!opt.unmarked_out.empty()) {
    ensure_writable(opt.unmarked_out, global);
  }
  const std::uint64_t seed = resolve_seed(global);
  RandomStream base_rng = derive_substream(seed, 0);
  RandomStream mark_rng = derive_substream(seed, 1);
  const LatentTensor base = opt.in.empty()
                                ? LatentTensor::standard_normal(key.latent_dims, base_rng)
                                : read_tensor(opt.in);
  const LatentTensor marked = mark_latent(base, key, mark_rng);
  write_tensor(marked, opt.out, to_dtype(opt.dtype));
  if (!opt.unmarked_out.empty()) {
    write_tensor(base, opt.unmarked_out, to_dtype(opt.dtype));
  }
  out << "marked=" << opt.out.string() << "\n";
  return 0;
}

// --------------------------------------------------------------- extract

struct ExtractOptions {
  fs::path key;
  fs::path in;
};

int run_extract(const ExtractOptions& opt, const GlobalOptions& global,
                std::ostream& out) {
  const KeyFile key_file = read_key(opt.key);
  const double threshold = global.threshold.value_or(key_file.threshold);
  const DetectionReport report =
      extract_latent(read_tensor(opt.in), key_file.key, threshold);
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "m_samples=" << report.m_samples << "\n";
  out << "mean_resultant=" << report.mean_resultant << "\n";
  out << "statistic=" << report.statistic << "\n";
  out << "p_value=" << report.p_value << "\n";
  out << "log_p_value=" << report.log_p_value << "\n";
  out << "threshold=" << report.threshold << "\n";
  out << "decision=" << (report.decision ? "detected" : "not_detected") << "\n";
  out << report_json(report).dump() << "\n";
  return report.decision ? kDetected : kNotDetected;
}

// ------------------------------------------------------ simulate detect-roc

struct DetectRocOptions {
  double gamma = 2.0;
  double beta = 0.001;
  std::vector<std::size_t> block{2, 4, 4};
  std::vector<std::size_t> dims{4, 64, 64};
  std::vector<double> noise{0.0, 0.1, 0.2, 0.5, 1.0};
  std::size_t trials = 100;
  std::size_t threads = 0;
  fs::path out;
};

int run_detect_roc(const DetectRocOptions& opt, const GlobalOptions& global,
                   std::ostream& out) {
  const BlockShape block = to_block(opt.block);
  DetectionTrialConfig cfg;
  cfg.params = ClweParams{block.volume(), opt.gamma, opt.beta};
  cfg.block_shape = block;
  cfg.latent_dims = to_dims(opt.dims, "--dims");
  cfg.threshold = global.threshold.value_or(kDefaultThreshold);
  cfg.trials = opt.trials;
  cfg.seed = resolve_seed(global);
  cfg.threads = opt.threads;
  cfg.params.validate();
  cfg.block_shape.validate_against(cfg.latent_dims);

  std::ofstream file;
  if (!opt.out.empty()) {
    file = open_output(opt.out, global);
  }
  const std::string header =
      "noise_sigma,trials,auc,true_positive_rate,false_positive_rate,threshold";
  out << header << "\n";
  if (file.is_open()) {
    file << header << "\n";
  }
  for (double sigma : opt.noise) {
    cfg.noise_sigma = sigma;
    const DetectionRocResult r = detection_roc(cfg);
    std::ostringstream row;
    row << sigma << ',' << cfg.trials << ',' << r.roc.auc << ','
        << r.true_positive_rate << ',' << r.false_positive_rate << ','
        << cfg.threshold;
    out << row.str() << "\n";
    if (file.is_open()) {
      file << row.str() << "\n";
    }
  }
  return 0;
}

// --------------------------------------------------------- simulate pairs

struct PairsOptions {
  fs::path key;
  std::size_t count = 100;
  fs::path out_dir;
};

int run_pairs(const PairsOptions& opt, const GlobalOptions& global,
              std::ostream& out) {
  const KeyFile key_file = read_key(opt.key);
  ensure_directory(opt.out_dir);
  for (std::size_t i = 0; i < opt.count; ++i) {
    ensure_writable(opt.out_dir / pair_name("marked", i), global);
    ensure_writable(opt.out_dir / pair_name("unmarked", i), global);
  }
  const std::uint64_t seed = resolve_seed(global);
  for (std::size_t i = 0; i < opt.count; ++i) {
    RandomStream rng = derive_substream(seed, i);
    const LatentTensor base =
        LatentTensor::standard_normal(key_file.key.latent_dims, rng);
    write_tensor(mark_latent(base, key_file.key, rng),
                 opt.out_dir / pair_name("marked", i));
    write_tensor(base, opt.out_dir / pair_name("unmarked", i));
  }
  out << "pairs=" << opt.count << "\n";
  out << "directory=" << opt.out_dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------- attack covariance

struct CovarianceOptions {
  std::vector<std::size_t> n{32};
  std::vector<std::size_t> m{1000, 10000, 100000};
  std::vector<double> gamma{1.0, 2.0, 4.0, 8.0};
  double beta = 0.001;
  std::size_t trials = 100;
  std::size_t threads = 0;
  std::string sampler = "quantile";
  bool large = false;
  fs::path out;
  fs::path summary;
};

int run_covariance(const CovarianceOptions& opt, const GlobalOptions& global,
                   std::ostream& out) {
  constexpr std::size_t kLargeM = 1000000;
  std::vector<AttackTrialConfig> grid;
  const std::uint64_t seed = resolve_seed(global);
  for (std::size_t n : opt.n) {
    for (double gamma : opt.gamma) {
      for (std::size_t m : opt.m) {
        if (m >= kLargeM && !opt.large) {
          throw UsageError("m >= 1000000 needs --large");
        }
        AttackTrialConfig cfg;
        cfg.n = n;
        cfg.m = m;
        cfg.gamma = gamma;
        cfg.beta = opt.beta;
        cfg.trials = opt.trials;
        cfg.seed = derive_seed(seed, grid.size());
        cfg.threads = opt.threads;
        cfg.selection = opt.sampler == "nearest" ? PancakeSelection::Nearest
                                                 : PancakeSelection::Quantile;
        cfg.validate();
        grid.push_back(cfg);
      }
    }
  }

  std::ofstream trials_file;
  std::ofstream summary_file;
  if (!opt.out.empty()) {
    trials_file = open_output(opt.out, global);
    trials_file << "n,m,gamma,beta,trial,label,score\n";
  }
  if (!opt.summary.empty()) {
    summary_file = open_output(opt.summary, global);
  }
  const std::string summary_header =
      "n,m,gamma,beta,trials,auc,threshold,threshold_accuracy";
  out << summary_header << "\n";
  if (summary_file.is_open()) {
    summary_file << summary_header << "\n";
  }

  for (const AttackTrialConfig& cfg : grid) {
    const AucResult r = covariance_auc(cfg);
    const double threshold = theoretical_covariance_threshold(cfg.gamma, cfg.beta);
    const double accuracy =
        threshold_accuracy(r.scores_positive, r.scores_negative, threshold);
    if (trials_file.is_open()) {
      for (std::size_t t = 0; t < cfg.trials; ++t) {
        trials_file << cfg.n << ',' << cfg.m << ',' << cfg.gamma << ','
                    << cfg.beta << ',' << t << ",1," << r.scores_positive[t]
                    << "\n";
        trials_file << cfg.n << ',' << cfg.m << ',' << cfg.gamma << ','
                    << cfg.beta << ',' << t << ",0," << r.scores_negative[t]
                    << "\n";
      }
    }
    std::ostringstream row;
    row << std::setprecision(std::numeric_limits<double>::max_digits10)
        << cfg.n << ',' << cfg.m << ',' << cfg.gamma << ',' << cfg.beta << ','
        << cfg.trials << ',' << r.auc << ',' << threshold << ',' << accuracy;
    out << row.str() << "\n";
    if (summary_file.is_open()) {
      summary_file << row.str() << "\n";
    }
  }
  return 0;
}

// ------------------------------------------------------- attack average

struct AverageOptions {
  fs::path pairs;
  fs::path key;
  fs::path out_dir;
};

int run_average(const AverageOptions& opt, const GlobalOptions& global,
                std::ostream& out) {
  const KeyFile key_file = read_key(opt.key);
  const double threshold = global.threshold.value_or(key_file.threshold);
  std::vector<LatentTensor> marked;
  std::vector<LatentTensor> unmarked;
  for (std::size_t i = 0;; ++i) {
    const fs::path m = opt.pairs / pair_name("marked", i);
    const fs::path u = opt.pairs / pair_name("unmarked", i);
    if (!fs::exists(m) && !fs::exists(u)) {
      break;
    }
    if (!fs::exists(m) || !fs::exists(u)) {
      throw UsageError("incomplete pair " + std::to_string(i) + " in " +
                       opt.pairs.string());
    }
    marked.push_back(read_tensor(m));
    unmarked.push_back(read_tensor(u));
  }
  if (marked.size() < 2) {
    throw UsageError("need at least two marked_NNNN.npy/unmarked_NNNN.npy pairs in " +
                     opt.pairs.string());
  }

  ensure_directory(opt.out_dir);
  ensure_writable(opt.out_dir / "mean_difference.npy", global);
  for (std::size_t i = 0; i < marked.size(); ++i) {
    ensure_writable(opt.out_dir / pair_name("cleaned", i), global);
  }

  const AveragingResult attack = averaging_attack(marked, unmarked);
  write_tensor(attack.mean_difference, opt.out_dir / "mean_difference.npy");
  std::vector<double> positive;
  std::vector<double> negative;
  std::size_t detected = 0;
  for (std::size_t i = 0; i < marked.size(); ++i) {
    write_tensor(attack.cleaned[i], opt.out_dir / pair_name("cleaned", i));
    const DetectionReport pos = extract_latent(attack.cleaned[i], key_file.key, threshold);
    const DetectionReport neg = extract_latent(unmarked[i], key_file.key, threshold);
    positive.push_back(pos.statistic);
    negative.push_back(neg.statistic);
    detected += pos.decision ? 1 : 0;
  }
  double max_abs = 0.0;
  for (double x : attack.mean_difference.data()) {
    max_abs = std::max(max_abs, std::abs(x));
  }
  out << "pairs=" << marked.size() << "\n";
  out << "mean_difference_max_abs=" << max_abs << "\n";
  out << "post_attack_auc=" << roc_auc(positive, negative) << "\n";
  out << "post_attack_detection_rate="
      << static_cast<double>(detected) / static_cast<double>(marked.size()) << "\n";
  return 0;
}

// ------------------------------------------------------------------ rose

struct RoseOptions {
  std::size_t bins = 36;
  fs::path z_file;
  fs::path key;
  fs::path in;
  std::string simulate;
  std::size_t samples = 10000;
  std::size_t n = 32;
  double gamma = 2.0;
  double beta = 0.1;
  double noise_width = 0.2;
  fs::path out;
};

std::vector<double> read_z_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::vector<double> z;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') {
      continue;
    }
    std::size_t used = 0;
    const double value = std::stod(line, &used);
    z.push_back(value);
  }
  return z;
}

int run_rose(const RoseOptions& opt, const GlobalOptions& global,
             std::ostream& out) {
  const int sources = (opt.z_file.empty() ? 0 : 1) + (opt.in.empty() ? 0 : 1) +
                      (opt.simulate.empty() ? 0 : 1);
  if (sources != 1) {
    throw UsageError("rose needs exactly one of --z, --in (with --key) or --simulate");
  }
  std::vector<double> z;
  if (!opt.z_file.empty()) {
    z = read_z_file(opt.z_file);
  } else if (!opt.in.empty()) {
    if (opt.key.empty()) {
      throw UsageError("rose --in needs --key");
    }
    const KeyFile key_file = read_key(opt.key);
    z = z_scores(detection_samples(read_tensor(opt.in), key_file.key),
                 key_file.key.direction, key_file.key.params.gamma);
  } else {
    const ClweParams params{opt.n, opt.gamma, opt.beta};
    params.validate();
    ZScoreSource source = ZScoreSource::Gaussian;
    if (opt.simulate == "hclwe") {
      source = ZScoreSource::Hclwe;
    } else if (opt.simulate == "hclwe-noisy") {
      source = ZScoreSource::NoisyHclwe;
    }
    RandomStream rng(resolve_seed(global));
    z = simulate_z_scores(source, opt.samples, params, opt.noise_width, rng);
  }

  const RoseHistogram hist = rose_histogram(z, opt.bins);
  std::ostringstream table;
  table << "bin,lower,upper,angle_lower_deg,angle_upper_deg,count\n";
  for (std::size_t b = 0; b < hist.bin_count; ++b) {
    table << b << ',' << hist.bin_lower(b) << ',' << hist.bin_upper(b) << ','
          << 360.0 * hist.bin_lower(b) << ',' << 360.0 * hist.bin_upper(b) << ','
          << hist.counts[b] << "\n";
  }
  if (!opt.out.empty()) {
    std::ofstream file = open_output(opt.out, global);
    file << table.str();
  }
  out << table.str();
  if (z.size() >= 2) {
    const RayleighResult test = rayleigh_test(z);
    out << "# samples=" << z.size() << " mean_resultant=" << test.mean_resultant
        << " p_value=" << test.p_value << "\n";
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"cluemark: CLWE-based latent watermarking toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Read options from a TOML/INI file");

  GlobalOptions global;
  std::uint64_t seed = 0;
  double threshold = kDefaultThreshold;
  auto* seed_opt = app.add_option("--seed", seed, "Random seed (default: random)");
  auto* threshold_opt = app.add_option("--threshold", threshold,
                                       "Detection p-value threshold")
                            ->check(CLI::Range(0.0, 1.0));
  app.add_flag("--force", global.force, "Overwrite existing outputs");

  KeygenOptions keygen;
  auto* keygen_cmd = app.add_subcommand("keygen", "Generate a secret key");
  keygen_cmd->add_option("--out,-o", keygen.out, "Key file to write")->required();
  keygen_cmd->add_option("--gamma", keygen.gamma, "Pancake frequency")
      ->check(CLI::PositiveNumber)->capture_default_str();
  keygen_cmd->add_option("--beta", keygen.beta, "Pancake width")
      ->check(CLI::PositiveNumber)->capture_default_str();
  keygen_cmd->add_option("--block", keygen.block, "Block shape c,h,w")
      ->delimiter(',')->expected(3);
  keygen_cmd->add_option("--dims", keygen.dims, "Latent shape c,h,w")
      ->delimiter(',')->expected(3);

  MarkOptions mark;
  auto* mark_cmd = app.add_subcommand("mark", "Embed the watermark into a latent");
  mark_cmd->add_option("--key,-k", mark.key, "Key file")->required()->check(CLI::ExistingFile);
  mark_cmd->add_option("--in,-i", mark.in, "Base latent (NPY); fresh N(0,1) from --seed if absent")
      ->check(CLI::ExistingFile);
  mark_cmd->add_option("--out,-o", mark.out, "Marked latent (NPY)")->required();
  mark_cmd->add_option("--unmarked-out", mark.unmarked_out, "Also write the base latent here");
  mark_cmd->add_option("--dtype", mark.dtype, "Output dtype")
      ->check(CLI::IsMember({"f4", "f8"}))->capture_default_str();

  ExtractOptions extract;
  auto* extract_cmd = app.add_subcommand(
      "extract", "Test a latent for the watermark (exit 0 detected, 1 not detected)");
  extract_cmd->add_option("--key,-k", extract.key, "Key file")->required()->check(CLI::ExistingFile);
  extract_cmd->add_option("--in,-i", extract.in, "Latent (NPY)")->required()->check(CLI::ExistingFile);

  auto* simulate_cmd = app.add_subcommand("simulate", "Latent-level simulations");
  simulate_cmd->require_subcommand(1);
  simulate_cmd->fallthrough();

  DetectRocOptions roc;
  auto* roc_cmd = simulate_cmd->add_subcommand(
      "detect-roc", "Detection AUC over a grid of latent noise levels");
  roc_cmd->add_option("--gamma", roc.gamma)->check(CLI::PositiveNumber)->capture_default_str();
  roc_cmd->add_option("--beta", roc.beta)->check(CLI::PositiveNumber)->capture_default_str();
  roc_cmd->add_option("--block", roc.block, "Block shape c,h,w")->delimiter(',')->expected(3);
  roc_cmd->add_option("--dims", roc.dims, "Latent shape c,h,w")->delimiter(',')->expected(3);
  roc_cmd->add_option("--noise", roc.noise, "Latent noise standard deviations")
      ->delimiter(',')->check(CLI::NonNegativeNumber);
  roc_cmd->add_option("--trials", roc.trials)->check(CLI::Range(2, 1000000))->capture_default_str();
  roc_cmd->add_option("--threads", roc.threads, "Worker threads (0 = all cores)");
  roc_cmd->add_option("--out,-o", roc.out, "CSV table");

  PairsOptions pairs;
  auto* pairs_cmd = simulate_cmd->add_subcommand(
      "pairs", "Write marked/unmarked latent pairs sharing base noise");
  pairs_cmd->add_option("--key,-k", pairs.key)->required()->check(CLI::ExistingFile);
  pairs_cmd->add_option("--count", pairs.count)->check(CLI::Range(1, 100000))->capture_default_str();
  pairs_cmd->add_option("--out-dir", pairs.out_dir)->required();

  auto* attack_cmd = app.add_subcommand("attack", "Distinguishing and removal attacks");
  attack_cmd->require_subcommand(1);
  attack_cmd->fallthrough();

  CovarianceOptions cov;
  auto* cov_cmd = attack_cmd->add_subcommand("covariance", "Covariance attack AUC sweep");
  cov_cmd->add_option("--n", cov.n, "Dimensions")->delimiter(',')->check(CLI::Range(2, 4096));
  cov_cmd->add_option("--m", cov.m, "Sample counts")->delimiter(',')->check(CLI::PositiveNumber);
  cov_cmd->add_option("--gamma", cov.gamma, "Pancake frequencies")
      ->delimiter(',')->check(CLI::PositiveNumber);
  cov_cmd->add_option("--beta", cov.beta)->check(CLI::PositiveNumber)->capture_default_str();
  cov_cmd->add_option("--trials", cov.trials)->check(CLI::Range(2, 1000000))->capture_default_str();
  cov_cmd->add_option("--threads", cov.threads, "Worker threads (0 = all cores)");
  cov_cmd->add_option("--sampler", cov.sampler, "Pancake index rule")
      ->check(CLI::IsMember({"quantile", "nearest"}))->capture_default_str();
  cov_cmd->add_flag("--large", cov.large, "Allow m >= 1000000");
  cov_cmd->add_option("--out,-o", cov.out, "Per-trial CSV (n,m,gamma,beta,trial,label,score)");
  cov_cmd->add_option("--summary", cov.summary, "Per-point AUC CSV");

  AverageOptions average;
  auto* avg_cmd = attack_cmd->add_subcommand("average", "Averaging (steganographic) attack");
  avg_cmd->add_option("--pairs", average.pairs, "Directory of marked_NNNN/unmarked_NNNN.npy")
      ->required()->check(CLI::ExistingDirectory);
  avg_cmd->add_option("--key,-k", average.key)->required()->check(CLI::ExistingFile);
  avg_cmd->add_option("--out-dir", average.out_dir)->required();

  RoseOptions rose;
  auto* rose_cmd = app.add_subcommand("rose", "Rose-diagram histogram of z-scores");
  rose_cmd->add_option("--bins", rose.bins)->check(CLI::Range(4, 100000))->capture_default_str();
  rose_cmd->add_option("--z", rose.z_file, "Text file of z-scores, one per line")
      ->check(CLI::ExistingFile);
  rose_cmd->add_option("--key,-k", rose.key)->check(CLI::ExistingFile);
  rose_cmd->add_option("--in,-i", rose.in, "Latent (NPY) scored against --key")
      ->check(CLI::ExistingFile);
  rose_cmd->add_option("--simulate", rose.simulate, "Simulated population")
      ->check(CLI::IsMember({"normal", "hclwe", "hclwe-noisy"}));
  rose_cmd->add_option("--samples", rose.samples)->check(CLI::Range(2, 100000000))->capture_default_str();
  rose_cmd->add_option("--n", rose.n)->check(CLI::Range(2, 4096))->capture_default_str();
  rose_cmd->add_option("--gamma", rose.gamma)->check(CLI::PositiveNumber)->capture_default_str();
  rose_cmd->add_option("--beta", rose.beta)->check(CLI::PositiveNumber)->capture_default_str();
  rose_cmd->add_option("--noise-width", rose.noise_width)
      ->check(CLI::PositiveNumber)->capture_default_str();
  rose_cmd->add_option("--out,-o", rose.out, "CSV output");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) {
    argv.push_back(a.c_str());
  }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kError;
  }
  if (seed_opt->count() > 0) {
    global.seed = seed;
  }
  if (threshold_opt->count() > 0) {
    global.threshold = threshold;
  }

  try {
    if (keygen_cmd->parsed()) {
      return run_keygen(keygen, global, out);
    }
    if (mark_cmd->parsed()) {
      return run_mark(mark, global, out);
    }
    if (extract_cmd->parsed()) {
      return run_extract(extract, global, out);
    }
    if (roc_cmd->parsed()) {
      return run_detect_roc(roc, global, out);
    }
    if (pairs_cmd->parsed()) {
      return run_pairs(pairs, global, out);
    }
    if (cov_cmd->parsed()) {
      return run_covariance(cov, global, out);
    }
    if (avg_cmd->parsed()) {
      return run_average(average, global, out);
    }
    if (rose_cmd->parsed()) {
      return run_rose(rose, global, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
  err << app.help();
  return kError;
}

}  // namespace cluemark::cli
