#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "labelnoise/baselines.hpp"
#include "labelnoise/core.hpp"
#include "labelnoise/dataset.hpp"
#include "labelnoise/isotron.hpp"
#include "labelnoise/metrics.hpp"
#include "labelnoise/noise.hpp"

namespace labelnoise {

// ---------------------------------------------------------------------------
// configuration

struct ExperimentConfig {
  std::string experiment = "sweep";  // sweep | synth | verify
  std::string dataset = "preset:digits-like";
  std::optional<DigitRemap> digits;
  std::vector<double> alphas = {0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
  std::size_t trials = 25;
  double train_fraction = 0.8;
  double gamma = 0.1;
  double lambda = 1e-8;
  std::size_t iterations = 100;
  IsotronVariant variant = IsotronVariant::isotron;
  std::optional<double> lipschitz;
  double holdout = 0.0;  // iterate-selection holdout inside the learner
  std::string noise = "sweep-sigmoid-abs";
  bool normalize = true;
  std::uint64_t seed = 0;
  std::size_t preset_n = 4000;  // size of the bundled synthetic dataset
  std::string out;
  std::string format = "csv";  // csv | json

  // synth experiment knobs
  std::size_t synth_train = 5000;
  std::size_t synth_test = 5000;
  std::size_t synth_iterations = 1000;

  std::size_t verify_trials = 1000;

  void validate() const {
    if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
      throw std::invalid_argument("config: train_fraction must lie in (0,1)");
    for (double a : alphas)
      if (!(a > 0.0)) throw std::invalid_argument("config: alpha values must be positive");
    if (format != "csv" && format != "json")
      throw std::invalid_argument("config: format must be csv or json");
  }

  // Canonical key=value form; also the hashing input.
  std::string canonical() const;
  std::string hash() const;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

inline std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    cell = trim(cell);
    if (!cell.empty()) out.push_back(std::stod(cell));
  }
  return out;
}

inline bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw std::invalid_argument("config: bad boolean '" + s + "'");
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

// One `key = value` pair per line; '#' starts a comment.
inline void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                               const std::string& value) {
  if (key == "experiment") cfg.experiment = value;
  else if (key == "dataset") cfg.dataset = value;
  else if (key == "digits") {
    auto v = detail::parse_list(value);
    if (v.size() != 2) throw std::invalid_argument("config: digits wants two values");
    cfg.digits = DigitRemap{static_cast<int>(v[0]), static_cast<int>(v[1])};
  } else if (key == "alphas") cfg.alphas = detail::parse_list(value);
  else if (key == "trials") cfg.trials = std::stoul(value);
  else if (key == "train_fraction") cfg.train_fraction = std::stod(value);
  else if (key == "gamma") cfg.gamma = std::stod(value);
  else if (key == "lambda") cfg.lambda = std::stod(value);
  else if (key == "iterations") cfg.iterations = std::stoul(value);
  else if (key == "variant") {
    if (value == "isotron") cfg.variant = IsotronVariant::isotron;
    else if (value == "slisotron") cfg.variant = IsotronVariant::slisotron;
    else throw std::invalid_argument("config: unknown variant '" + value + "'");
  } else if (key == "lipschitz") cfg.lipschitz = std::stod(value);
  else if (key == "holdout") cfg.holdout = std::stod(value);
  else if (key == "noise") cfg.noise = value;
  else if (key == "normalize") cfg.normalize = detail::parse_bool(value);
  else if (key == "seed") cfg.seed = std::stoull(value);
  else if (key == "preset_n") cfg.preset_n = std::stoul(value);
  else if (key == "out") cfg.out = value;
  else if (key == "format") cfg.format = value;
  else if (key == "synth_train") cfg.synth_train = std::stoul(value);
  else if (key == "synth_test") cfg.synth_test = std::stoul(value);
  else if (key == "synth_iterations") cfg.synth_iterations = std::stoul(value);
  else if (key == "verify_trials") cfg.verify_trials = std::stoul(value);
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

inline ExperimentConfig parse_config_text(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key = value at line " +
                                  std::to_string(line_no));
    apply_config_entry(cfg, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  return parse_config_text(in);
}

inline std::string ExperimentConfig::canonical() const {
  std::ostringstream os;
  os << "alphas=";
  for (std::size_t i = 0; i < alphas.size(); ++i)
    os << (i ? "," : "") << detail::format_double(alphas[i]);
  os << "\ndataset=" << dataset;
  if (digits) os << "\ndigits=" << digits->positive << "," << digits->negative;
  os << "\nexperiment=" << experiment << "\nformat=" << format
     << "\ngamma=" << detail::format_double(gamma) << "\niterations=" << iterations
     << "\nlambda=" << detail::format_double(lambda);
  if (lipschitz) os << "\nlipschitz=" << detail::format_double(*lipschitz);
  os << "\nholdout=" << detail::format_double(holdout) << "\nnoise=" << noise
     << "\nnormalize=" << (normalize ? "true" : "false") << "\npreset_n=" << preset_n
     << "\nseed=" << seed << "\nsynth_iterations=" << synth_iterations
     << "\nsynth_test=" << synth_test << "\nsynth_train=" << synth_train
     << "\ntrain_fraction=" << detail::format_double(train_fraction) << "\ntrials=" << trials
     << "\nvariant=" << (variant == IsotronVariant::isotron ? "isotron" : "slisotron") << "\n";
  return os.str();
}

inline std::string ExperimentConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline Dataset load_configured_dataset(const ExperimentConfig& cfg) {
  const std::string& spec = cfg.dataset;
  if (spec == "preset:digits-like") return make_digits_like(cfg.preset_n, cfg.seed);
  if (spec.rfind("csv:", 0) == 0) return load_csv(spec.substr(4), cfg.digits);
  if (spec.rfind("idx:", 0) == 0) {
    std::string rest = spec.substr(4);
    auto comma = rest.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("dataset: idx wants 'idx:IMAGES,LABELS'");
    if (!cfg.digits) throw std::invalid_argument("dataset: idx loading needs a digits remap");
    return load_idx(rest.substr(0, comma), rest.substr(comma + 1), *cfg.digits);
  }
  throw std::invalid_argument("dataset: unknown specification '" + spec + "'");
}

// ---------------------------------------------------------------------------
// reports

struct SweepRow {
  double alpha = 0.0;
  double flip_mean = 0.0, flip_se = 0.0;
  double ridge_mean = 0.0, ridge_se = 0.0;
  double isotron_mean = 0.0, isotron_se = 0.0;
};

struct ExperimentReport {
  std::vector<SweepRow> rows;
  std::map<std::string, std::string> metadata;

  std::string to_csv() const {
    std::string out = "alpha,flip_mean,flip_se,ridge_mean,ridge_se,isotron_mean,isotron_se\n";
    char buf[256];
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf, "%.4f,%.4f,%.4f,%.4f,%.4f,%.4f,%.4f\n", r.alpha, r.flip_mean,
                    r.flip_se, r.ridge_mean, r.ridge_se, r.isotron_mean, r.isotron_se);
      out += buf;
    }
    return out;
  }

  nlohmann::json to_json() const {
    nlohmann::json rows_json = nlohmann::json::array();
    for (const auto& r : rows)
      rows_json.push_back({{"alpha", r.alpha},
                           {"flip_mean", r.flip_mean},
                           {"flip_se", r.flip_se},
                           {"ridge_mean", r.ridge_mean},
                           {"ridge_se", r.ridge_se},
                           {"isotron_mean", r.isotron_mean},
                           {"isotron_se", r.isotron_se}});
    return {{"rows", rows_json}, {"metadata", metadata}};
  }
};

namespace detail {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

inline MeanSe mean_se(const std::vector<double>& v) {
  MeanSe m;
  const double n = static_cast<double>(v.size());
  for (double x : v) m.mean += x;
  m.mean /= n;
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return m;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// synthetic experiment: two-Gaussian preset under boundary-consistent noise

struct SynthResult {
  double accuracy = 0.0;
  double mean_abs_dev = 0.0;  // |u_hat - analytic eta_bar| averaged over test points
  struct Row {
    double z, u_hat, eta_bar;
  };
  std::vector<Row> dump;

  std::string to_csv() const {
    std::string out = "z,u_hat,eta_bar\n";
    char buf[128];
    for (const auto& r : dump) {
      std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f\n", r.z, r.u_hat, r.eta_bar);
      out += buf;
    }
    return out;
  }
};

// Draws a corrupted training sample from the Gaussian-mixture preset with
// symmetric flip functions 1/(1 + e^|z|), fits the learner, and evaluates on
// clean test points. The analytic corrupted class-probability is available in
// closed form, so the dump carries (true score, estimate, analytic value).
inline SynthResult run_synthetic(const ExperimentConfig& cfg,
                                 bool zero_noise_variant = false) {
  auto dist = GenerativeDistribution::gaussian_mixture_preset();
  FlipFn flip = zero_noise_variant ? constant_flip(0.0) : sigmoid_abs_flip(1.0);
  NoiseModel noise = NoiseModel::bcn_plus(
      flip, flip, [&dist](std::span<const double> x) { return dist.score(x); });

  LabeledSample train_clean = sample_clean(dist, cfg.synth_train, cfg.seed);
  LabeledSample train_noisy = corrupt_sample(train_clean, noise, cfg.seed + 1);
  LabeledSample test = sample_clean(dist, cfg.synth_test, cfg.seed + 2);

  TrainConfig tc;
  tc.iterations = cfg.synth_iterations;
  tc.variant = cfg.variant;
  tc.lipschitz = cfg.lipschitz;
  tc.holdout_fraction = 0.0;
  tc.seed = cfg.seed;
  tc.normalize_to_unit_ball = cfg.normalize;
  IsotronModel model = train(train_noisy, tc);

  SynthResult res;
  res.dump.reserve(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    auto x = test.x.row(i);
    double z = dist.score(x);
    double p = predict_proba(model, x);
    double f = flip(z);
    double eta_bar = corrupted_eta(dist.eta(x), f, f);
    if (classify(model, x) == test.y[i]) res.accuracy += 1.0;
    res.mean_abs_dev += std::abs(p - eta_bar);
    res.dump.push_back({z, p, eta_bar});
  }
  res.accuracy /= static_cast<double>(test.size());
  res.mean_abs_dev /= static_cast<double>(test.size());
  std::sort(res.dump.begin(), res.dump.end(),
            [](const SynthResult::Row& a, const SynthResult::Row& b) { return a.z < b.z; });
  return res;
}

// ---------------------------------------------------------------------------
// noise sweep over alpha

// Flip probability used by the sweep at strength alpha, applied to the
// unit-norm hyperplane score: 1/(1 + e^{|z|/alpha}). Noise grows with alpha
// toward 1/2 near the boundary and vanishes as alpha -> 0.
inline FlipFn sweep_flip(double alpha) { return sigmoid_abs_flip(1.0 / alpha); }

// Noise descriptions accepted by the config:
//   sweep-sigmoid-abs     per-row 1/(1 + e^{|z|/alpha})   (default)
//   sigmoid-abs(c)        fixed 1/(1 + e^{c|z|}) at every row
//   constant(c)           constant flip probability c on both labels
//   step(a)               f_neg(z) = a when z <= 0 else 0, f_pos = 0
// All are mediated by the unit-norm filter hyperplane score.
struct NoisePreset {
  FlipFn f_neg, f_pos;
};

inline NoisePreset make_noise_preset(const std::string& spec, double alpha) {
  auto parse_arg = [&](const std::string& name) {
    if (spec.size() < name.size() + 2 || spec.back() != ')')
      throw std::invalid_argument("noise: expected '" + name + "(value)'");
    return std::stod(spec.substr(name.size() + 1, spec.size() - name.size() - 2));
  };
  if (spec == "sweep-sigmoid-abs") {
    FlipFn f = sweep_flip(alpha);
    return {f, f};
  }
  if (spec.rfind("sigmoid-abs(", 0) == 0) {
    FlipFn f = sigmoid_abs_flip(parse_arg("sigmoid-abs"));
    return {f, f};
  }
  if (spec.rfind("constant(", 0) == 0) {
    FlipFn f = constant_flip(parse_arg("constant"));
    return {f, f};
  }
  if (spec.rfind("step(", 0) == 0)
    return {step_flip(parse_arg("step")), constant_flip(0.0)};
  throw std::invalid_argument("noise: unknown preset '" + spec + "'");
}

inline ExperimentReport run_noise_sweep(const ExperimentConfig& cfg, const Dataset& dataset) {
  cfg.validate();
  Matrix features = with_bias_column(dataset.x);
  MarginFilterResult filtered = margin_filter(features, dataset.y, cfg.gamma);

  bool has_pos = false, has_neg = false;
  for (auto label : filtered.y) (label > 0 ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg)
    throw std::runtime_error("run_noise_sweep: margin filter emptied a class");

  // fixed train/test split; corruptions vary per trial
  const std::size_t n = filtered.y.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng split_rng = Rng(cfg.seed).stream(0x5b117);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[split_rng.below(i + 1)]);
  std::size_t n_train = static_cast<std::size_t>(cfg.train_fraction * static_cast<double>(n));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);

  LabeledSample train_set;
  train_set.x = Matrix(n_train, filtered.x.cols);
  train_set.y.resize(n_train);
  Matrix test_x(n - n_train, filtered.x.cols);
  std::vector<std::int8_t> test_y(n - n_train);
  for (std::size_t i = 0; i < n; ++i) {
    auto src = filtered.x.row(order[i]);
    if (i < n_train) {
      std::copy(src.begin(), src.end(), train_set.x.row(i).begin());
      train_set.y[i] = filtered.y[order[i]];
    } else {
      std::copy(src.begin(), src.end(), test_x.row(i - n_train).begin());
      test_y[i - n_train] = filtered.y[order[i]];
    }
  }
  bool test_pos = false, test_neg = false;
  for (auto label : test_y) (label > 0 ? test_pos : test_neg) = true;
  if (!test_pos || !test_neg)
    throw std::runtime_error("run_noise_sweep: test split lost a class");

  ExperimentReport report;
  Vec hyperplane = filtered.hyperplane;

  for (std::size_t ai = 0; ai < cfg.alphas.size(); ++ai) {
    double alpha = cfg.alphas[ai];
    NoisePreset preset = make_noise_preset(cfg.noise, alpha);
    NoiseModel noise = NoiseModel::bcn(
        preset.f_neg, preset.f_pos,
        [hyperplane](std::span<const double> x) { return dot(hyperplane, x); });

    std::vector<double> flips, ridge_accs, iso_accs;
    for (std::size_t ti = 0; ti < cfg.trials; ++ti) {
      std::uint64_t trial_seed = cfg.seed + ti + 1000000ull * ai;
      LabeledSample noisy = corrupt_sample(train_set, noise, trial_seed);

      double flipped = 0.0;
      for (std::size_t i = 0; i < n_train; ++i)
        if (noisy.y[i] != train_set.y[i]) flipped += 1.0;
      flips.push_back(flipped / static_cast<double>(n_train));

      Vec w = ridge_fit(noisy.x, noisy.y, cfg.lambda);
      double ridge_acc = 0.0;
      for (std::size_t i = 0; i < test_y.size(); ++i) {
        int pred = dot(w, test_x.row(i)) >= 0.0 ? 1 : -1;
        if (pred == test_y[i]) ridge_acc += 1.0;
      }
      ridge_accs.push_back(ridge_acc / static_cast<double>(test_y.size()));

      TrainConfig tc;
      tc.iterations = cfg.iterations;
      tc.variant = cfg.variant;
      tc.lipschitz = cfg.lipschitz;
      tc.holdout_fraction = cfg.holdout;
      tc.seed = trial_seed;
      tc.normalize_to_unit_ball = cfg.normalize;
      IsotronModel model = train(noisy, tc);
      double iso_acc = 0.0;
      for (std::size_t i = 0; i < test_y.size(); ++i)
        if (classify(model, test_x.row(i)) == test_y[i]) iso_acc += 1.0;
      iso_accs.push_back(iso_acc / static_cast<double>(test_y.size()));
    }

    SweepRow row;
    row.alpha = alpha;
    auto f = detail::mean_se(flips);
    auto r = detail::mean_se(ridge_accs);
    auto s = detail::mean_se(iso_accs);
    row.flip_mean = f.mean;
    row.flip_se = f.se;
    row.ridge_mean = r.mean;
    row.ridge_se = r.se;
    row.isotron_mean = s.mean;
    row.isotron_se = s.se;
    report.rows.push_back(row);
  }

  report.metadata["config_hash"] = cfg.hash();
  report.metadata["seed"] = std::to_string(cfg.seed);
  report.metadata["n_after_filter"] = std::to_string(n);
  report.metadata["n_train"] = std::to_string(n_train);
  report.metadata["n_test"] = std::to_string(n - n_train);
  report.metadata["trials"] = std::to_string(cfg.trials);
  return report;
}

}  // namespace labelnoise
