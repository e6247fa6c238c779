// Command-line entry points: `synth` reproduces the two-Gaussian experiment,
// `sweep` runs the noise sweep against ridge and the Isotron, `verify` runs
// the randomized theorem checks, and `isotonic-demo` prints PAV / LPAV fits.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "labelnoise/labelnoise.hpp"

namespace {

int write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return 1;
  }
  out << text;
  return 0;
}

void add_sweep_overrides(CLI::App* cmd, std::vector<std::pair<std::string, std::string>>* overrides,
                         std::string* config_path) {
  cmd->add_option("--config", *config_path, "config file (key = value lines)");
  static const char* keys[] = {"dataset", "digits",  "alphas",   "trials", "train_fraction",
                               "gamma",   "lambda",  "iterations", "variant", "lipschitz", "holdout",
                               "normalize", "seed",  "preset_n", "out",    "format", "noise"};
  for (const char* key : keys) {
    cmd->add_option_function<std::string>(
        std::string("--") + key,
        [overrides, key = std::string(key)](const std::string& v) {
          overrides->emplace_back(key, v);
        },
        std::string("override config key '") + key + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"learning from binary labels under instance-dependent corruption"};
  app.require_subcommand(1);

  // --- synth ---
  auto* synth = app.add_subcommand("synth", "two-Gaussian preset: corrupt, fit, dump the link");
  std::string synth_out = "synth.csv";
  labelnoise::ExperimentConfig synth_cfg;
  bool synth_zero_noise = false;
  synth->add_option("--out", synth_out, "where to write the z,u_hat,eta_bar dump");
  synth->add_option("--seed", synth_cfg.seed, "base seed");
  synth->add_option("--train", synth_cfg.synth_train, "training sample size");
  synth->add_option("--test", synth_cfg.synth_test, "clean test sample size");
  synth->add_option("--iterations", synth_cfg.synth_iterations, "learner iterations");
  synth->add_flag("--zero-noise", synth_zero_noise, "skip the label corruption");

  // --- sweep ---
  auto* sweep = app.add_subcommand("sweep", "noise sweep: ridge vs Isotron accuracy per alpha");
  std::string sweep_config_path;
  std::vector<std::pair<std::string, std::string>> sweep_overrides;
  add_sweep_overrides(sweep, &sweep_overrides, &sweep_config_path);

  // --- verify ---
  auto* verify = app.add_subcommand("verify", "randomized checks of the library's identities");
  int verify_trials = 1000;
  std::uint64_t verify_seed = 0xabc0000ull;
  std::string verify_out;
  verify->add_option("--trials", verify_trials, "trials per check")->check(CLI::PositiveNumber);
  verify->add_option("--seed", verify_seed, "base seed");
  verify->add_option("--out", verify_out, "write the JSON report here instead of stdout");

  // --- isotonic-demo ---
  auto* demo = app.add_subcommand("isotonic-demo", "fit PAV (and optionally LPAV) to a sequence");
  std::string demo_targets = "1,0,1";
  std::string demo_scores;
  double demo_lipschitz = 0.0;
  bool demo_has_lipschitz = false;
  demo->add_option("--targets", demo_targets, "comma-separated targets in [0,1]");
  demo->add_option("--scores", demo_scores, "comma-separated sorted scores (default 0,1,2,...)");
  demo->add_option("--lipschitz", demo_lipschitz, "also fit LPAV with this constant")
      ->each([&](const std::string&) { demo_has_lipschitz = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (*synth) {
      auto res = labelnoise::run_synthetic(synth_cfg, synth_zero_noise);
      if (int rc = write_text(synth_out, res.to_csv()); rc != 0) return rc;
      nlohmann::json summary{{"accuracy", res.accuracy}, {"mean_abs_dev", res.mean_abs_dev}};
      std::cout << summary.dump(2) << "\n";
      return 0;
    }

    if (*sweep) {
      labelnoise::ExperimentConfig cfg;
      if (!sweep_config_path.empty()) cfg = labelnoise::load_config(sweep_config_path);
      for (const auto& [key, value] : sweep_overrides)
        labelnoise::apply_config_entry(cfg, key, value);
      cfg.validate();
      auto dataset = labelnoise::load_configured_dataset(cfg);
      auto report = labelnoise::run_noise_sweep(cfg, dataset);
      std::string text = cfg.format == "csv" ? report.to_csv() : report.to_json().dump(2) + "\n";
      return write_text(cfg.out, text);
    }

    if (*verify) {
      auto report = labelnoise::oracle::run_all(verify_trials, verify_seed);
      if (int rc = write_text(verify_out, report.dump(2) + "\n"); rc != 0) return rc;
      if (!verify_out.empty() && verify_out != "-") {
        for (const auto& check : report["checks"])
          std::cout << (check["pass"].get<bool>() ? "pass " : "FAIL ")
                    << check["name"].get<std::string>() << "\n";
      }
      return report["all_passed"].get<bool>() ? 0 : 1;
    }

    if (*demo) {
      auto targets = labelnoise::detail::parse_list(demo_targets);
      std::vector<double> scores;
      if (demo_scores.empty())
        for (std::size_t i = 0; i < targets.size(); ++i) scores.push_back(double(i));
      else
        scores = labelnoise::detail::parse_list(demo_scores);
      auto fit = labelnoise::pav(scores, targets);
      std::optional<labelnoise::IsotonicFit> lfit;
      if (demo_has_lipschitz) lfit = labelnoise::lpav(scores, targets, demo_lipschitz);
      std::printf(lfit ? "score,target,pav,lpav\n" : "score,target,pav\n");
      for (std::size_t i = 0; i < scores.size(); ++i) {
        double p = labelnoise::interpolate_link(fit, scores[i]);
        if (lfit)
          std::printf("%.6f,%.6f,%.6f,%.6f\n", scores[i], targets[i], p,
                      labelnoise::interpolate_link(*lfit, scores[i]));
        else
          std::printf("%.6f,%.6f,%.6f\n", scores[i], targets[i], p);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
