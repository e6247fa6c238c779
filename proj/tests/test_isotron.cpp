#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "labelnoise/experiments.hpp"
#include "labelnoise/isotron.hpp"
#include "labelnoise/noise.hpp"

using namespace labelnoise;

namespace {

LabeledSample toy_sample() {
  LabeledSample s;
  s.x = Matrix(4, 2);
  s.x.data = {1.0, 0.0, 0.0, 1.0, -1.0, 0.0, 0.0, -1.0};
  s.y = {1, 1, -1, -1};
  return s;
}

}  // namespace

TEST_CASE("train validates its inputs") {
  auto s = toy_sample();
  TrainConfig cfg;
  cfg.iterations = 0;
  CHECK_THROWS_AS(train(s, cfg), std::invalid_argument);
  cfg.iterations = 1;
  cfg.holdout_fraction = 1.0;
  CHECK_THROWS_AS(train(s, cfg), std::invalid_argument);
  cfg.holdout_fraction = 0.0;
  s.y[0] = 0;
  CHECK_THROWS_AS(train(s, cfg), std::invalid_argument);
}

TEST_CASE("one iteration from zero weights is the unrolled update") {
  auto s = toy_sample();
  TrainConfig cfg;
  cfg.iterations = 1;
  cfg.holdout_fraction = 0.0;
  cfg.normalize_to_unit_ball = false;
  auto model = train(s, cfg);
  // all scores tie at zero, so the first link is the constant target mean and
  // the single update is w = (1/m) sum (t_i - mean) x_i
  double mean = 0.5;
  Vec expected(2, 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    double r = ((s.y[i] + 1) / 2 - mean) / double(s.size());
    for (std::size_t j = 0; j < 2; ++j) expected[j] += r * s.x.row(i)[j];
  }
  REQUIRE(model.weights.size() == 2);
  CHECK(model.weights[0] == Catch::Approx(expected[0]).margin(1e-15));
  CHECK(model.weights[1] == Catch::Approx(expected[1]).margin(1e-15));
  CHECK(model.train_errors.size() == 2);  // initial candidate plus the updated one
}

TEST_CASE("pure label noise learns a constant near one half") {
  // single-index signal absent: eta is 1/2 everywhere
  auto dist = GenerativeDistribution::glm({1.0, 1.0}, [](double) { return 0.5; }, 2.0);
  auto sample = sample_clean(dist, 10000, 21);
  TrainConfig cfg;
  cfg.iterations = 30;
  cfg.holdout_fraction = 0.0;
  auto model = train(sample, cfg);
  auto test = sample_clean(dist, 2000, 22);
  double dev = 0.0;
  for (std::size_t i = 0; i < test.size(); ++i)
    dev += std::abs(predict_proba(model, test.x.row(i)) - 0.5);
  dev /= double(test.size());
  REQUIRE(dev <= 0.05);
}

TEST_CASE("predictions interpolate the link and respect monotonicity") {
  auto s = toy_sample();
  TrainConfig cfg;
  cfg.iterations = 20;
  cfg.holdout_fraction = 0.0;
  cfg.normalize_to_unit_ball = false;
  auto model = train(s, cfg);

  // knot scores map to knot values
  for (std::size_t i = 0; i < model.link.size(); ++i) {
    // construct a point with the exact knot score along the weight direction
    double wn = dot(model.weights, model.weights);
    REQUIRE(wn > 0.0);
    Vec x{model.weights[0] * model.link.scores[i] / wn,
          model.weights[1] * model.link.scores[i] / wn};
    CHECK(predict_proba(model, x) == Catch::Approx(model.link.values[i]).margin(1e-9));
  }

  // larger scores never decrease the probability
  double prev = -1.0;
  for (double t = -3.0; t <= 3.0; t += 0.1) {
    Vec x{model.weights[0] * t, model.weights[1] * t};
    double p = predict_proba(model, x);
    REQUIRE(p >= prev - 1e-12);
    REQUIRE(p >= 0.0);
    REQUIRE(p <= 1.0);
    prev = p;
  }

  CHECK_THROWS_AS(predict_proba(model, Vec{1.0}), std::invalid_argument);
}

TEST_CASE("classification thresholds at one half with ties positive") {
  IsotronModel model;
  model.weights = {1.0};
  model.feature_scale = 1.0;
  model.link.scores = {-1.0, 1.0};
  model.link.values = {0.0, 1.0};
  CHECK(classify(model, Vec{0.52}) == 1);   // proba 0.76
  CHECK(classify(model, Vec{-0.2}) == -1);  // proba 0.4
  CHECK(classify(model, Vec{0.0}) == 1);    // proba exactly 0.5
}

TEST_CASE("training is invariant to sample permutation without a holdout") {
  auto dist = GenerativeDistribution::gaussian_mixture_preset();
  auto sample = sample_clean(dist, 300, 33);
  TrainConfig cfg;
  cfg.iterations = 15;
  cfg.holdout_fraction = 0.0;
  auto base = train(sample, cfg);

  LabeledSample shuffled;
  shuffled.x = Matrix(sample.size(), sample.dim());
  shuffled.y.resize(sample.size());
  std::vector<std::size_t> perm(sample.size());
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(7);
  for (std::size_t i = perm.size() - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    auto src = sample.x.row(perm[i]);
    std::copy(src.begin(), src.end(), shuffled.x.row(i).begin());
    shuffled.y[i] = sample.y[perm[i]];
  }
  auto moved = train(shuffled, cfg);
  REQUIRE(moved.weights.size() == base.weights.size());
  for (std::size_t j = 0; j < base.weights.size(); ++j)
    REQUIRE(moved.weights[j] == Catch::Approx(base.weights[j]).margin(1e-9));
}

TEST_CASE("noise-free realizable glm reaches low square regret") {
  Vec w_star{0.8, -0.5, 0.3, 0.9, -0.2};
  auto dist = GenerativeDistribution::glm(w_star, [](double z) { return logistic(z); }, 2.0);
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto sample = sample_clean(dist, 20000, seed);
    TrainConfig cfg;
    cfg.iterations = 150;
    cfg.holdout_fraction = 0.3;
    cfg.seed = seed;
    auto model = train(sample, cfg);
    auto test = sample_clean(dist, 4000, 1000 + seed);
    double reg = 0.0;
    for (std::size_t i = 0; i < test.size(); ++i) {
      double diff = predict_proba(model, test.x.row(i)) - dist.eta(test.x.row(i));
      reg += diff * diff;
    }
    total += reg / double(test.size());
  }
  REQUIRE(total / 5.0 < 0.01);
}

TEST_CASE("holdout regret against the analytic corrupted probability shrinks with m") {
  auto dist = GenerativeDistribution::gaussian_mixture_preset();
  FlipFn flip = sigmoid_abs_flip(1.0);
  NoiseModel noise = NoiseModel::bcn_plus(
      flip, flip, [&dist](std::span<const double> x) { return dist.score(x); });
  auto test = sample_clean(dist, 4000, 9999);

  auto regret_at = [&](std::size_t m) {
    double acc = 0.0;
    const int reps = 3;
    for (int rep = 0; rep < reps; ++rep) {
      auto clean = sample_clean(dist, m, 100 + rep);
      auto noisy = corrupt_sample(clean, noise, 200 + rep);
      TrainConfig cfg;
      cfg.iterations = 40;
      cfg.variant = IsotronVariant::slisotron;
      cfg.holdout_fraction = 0.3;
      cfg.seed = rep;
      auto model = train(noisy, cfg);
      double reg = 0.0;
      for (std::size_t i = 0; i < test.size(); ++i) {
        auto x = test.x.row(i);
        double f = flip(dist.score(x));
        double eta_bar = corrupted_eta(dist.eta(x), f, f);
        double diff = predict_proba(model, x) - eta_bar;
        reg += diff * diff;
      }
      acc += reg / double(test.size());
    }
    return acc / double(reps);
  };

  double r500 = regret_at(500);
  double r2000 = regret_at(2000);
  double r8000 = regret_at(8000);
  INFO("regrets: " << r500 << " " << r2000 << " " << r8000);
  REQUIRE(r2000 <= 1.1 * r500);
  REQUIRE(r8000 <= 1.1 * r2000);
}

TEST_CASE("two-gaussian preset reaches the reported accuracy band") {
  ExperimentConfig cfg;
  cfg.seed = 0;
  auto res = run_synthetic(cfg);
  REQUIRE(res.accuracy >= 0.98);
  REQUIRE(res.mean_abs_dev <= 0.05);

  // without the corruption the separable preset is essentially perfect
  auto clean = run_synthetic(cfg, /*zero_noise_variant=*/true);
  REQUIRE(clean.accuracy >= 0.99);
}

TEST_CASE("holdout training records both error tracks") {
  auto dist = GenerativeDistribution::gaussian_mixture_preset();
  auto sample = sample_clean(dist, 400, 71);
  TrainConfig cfg;
  cfg.iterations = 10;
  cfg.holdout_fraction = 0.3;
  cfg.seed = 5;
  auto model = train(sample, cfg);
  REQUIRE(model.train_errors.size() == 11);
  REQUIRE(model.holdout_errors.size() == 11);
  REQUIRE(model.selected_iteration < model.holdout_errors.size());
  double best = model.holdout_errors[model.selected_iteration];
  for (double e : model.holdout_errors) REQUIRE(best <= e + 1e-15);
}
