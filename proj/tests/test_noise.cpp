#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "labelnoise/baselines.hpp"
#include "labelnoise/dataset.hpp"
#include "labelnoise/experiments.hpp"
#include "labelnoise/noise.hpp"
#include "labelnoise/oracle.hpp"

using namespace labelnoise;

TEST_CASE("corrupted eta arithmetic") {
  CHECK(corrupted_eta(0.8, 0.1, 0.2) == Catch::Approx(0.76).margin(1e-15));
  CHECK(corrupted_eta(0.31, 0.0, 0.0) == 0.31);
  // class-conditional constants: (1 - a - b) eta + b
  CHECK(corrupted_eta(0.5, 0.3, 0.1) == Catch::Approx(0.4).margin(1e-15));
  CHECK_THROWS_AS(corrupted_eta(0.5, 0.6, 0.5), std::runtime_error);
  CHECK_THROWS_AS(corrupted_eta(1.2, 0.1, 0.1), std::invalid_argument);
}

TEST_CASE("inverse corrupted eta") {
  CHECK(invert_corrupted_eta(0.76, 0.1, 0.2) == Catch::Approx(0.8).margin(1e-12));
  CHECK(invert_corrupted_eta(0.42, 0.0, 0.0) == 0.42);
  CHECK(invert_corrupted_eta(0.4, 0.3, 0.1) == Catch::Approx(0.5).margin(1e-12));
  CHECK_THROWS_AS(invert_corrupted_eta(0.4, 0.7, 0.4), std::runtime_error);
}

TEST_CASE("corruption round-trips and stays a probability") {
  Rng rng(101);
  for (int rep = 0; rep < 10000; ++rep) {
    double eta = rng.uniform();
    double total = rng.uniform(0.0, 1.0 - 1e-6);
    double split = rng.uniform();
    double rp = total * split;
    double rn = total * (1.0 - split);
    double bar = corrupted_eta(eta, rp, rn);
    REQUIRE(bar >= 0.0);
    REQUIRE(bar <= 1.0);
    REQUIRE(invert_corrupted_eta(bar, rp, rn) == Catch::Approx(eta).margin(1e-12));
  }
}

TEST_CASE("corrupt_sample with zero noise is the identity") {
  auto dist = GenerativeDistribution::gaussian_mixture_preset();
  auto sample = sample_clean(dist, 500, 1);
  auto noisy = corrupt_sample(sample, NoiseModel::ccn(0.0, 0.0), 99);
  REQUIRE(noisy.y == sample.y);
  REQUIRE(noisy.x.data == sample.x.data);
  CHECK(noisy.provenance == Provenance::corrupted);
}

TEST_CASE("symmetric noise flips the expected fraction") {
  const double alpha = 0.49;
  auto dist = GenerativeDistribution::gaussian_mixture_preset();
  auto sample = sample_clean(dist, 100000, 2);
  auto noisy = corrupt_sample(sample, NoiseModel::sln(alpha), 3);
  double flips = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i)
    if (noisy.y[i] != sample.y[i]) flips += 1.0;
  flips /= double(sample.size());
  REQUIRE(std::abs(flips - alpha) < 0.01);
  CHECK_THROWS_AS(NoiseModel::sln(0.5), std::runtime_error);
}

TEST_CASE("sweep noise on margin-filtered data flips near 0.44 at alpha 8") {
  auto data = make_digits_like(4000, 0);
  Matrix features = with_bias_column(data.x);
  auto filtered = margin_filter(features, data.y, 0.1);
  LabeledSample sample;
  sample.x = filtered.x;
  sample.y = filtered.y;
  Vec w = filtered.hyperplane;
  NoiseModel noise =
      NoiseModel::byln(sweep_flip(8.0), [w](std::span<const double> x) { return dot(w, x); });
  double flips = 0.0;
  for (std::uint64_t trial = 0; trial < 5; ++trial) {
    auto noisy = corrupt_sample(sample, noise, trial);
    for (std::size_t i = 0; i < sample.size(); ++i)
      if (noisy.y[i] != sample.y[i]) flips += 1.0;
  }
  flips /= 5.0 * double(sample.size());
  REQUIRE(flips == Catch::Approx(0.44).margin(0.02));
}

TEST_CASE("corrupt_distribution under symmetric and class-conditional noise") {
  auto dist = DiscreteDistribution::from_scalars({0.0, 1.0}, {0.5, 0.5}, {0.2, 0.8});

  auto zero = corrupt_distribution(dist, NoiseModel::ccn(0.0, 0.0));
  CHECK(zero.eta() == dist.eta());
  CHECK(zero.base_rate() == dist.base_rate());

  auto sym = corrupt_distribution(dist, NoiseModel::sln(0.25));
  CHECK(sym.eta()[0] == Catch::Approx(0.35).margin(1e-15));
  CHECK(sym.eta()[1] == Catch::Approx(0.65).margin(1e-15));
  CHECK(sym.base_rate() == Catch::Approx(0.5).margin(1e-15));

  auto ccn = corrupt_distribution(dist, NoiseModel::ccn(0.3, 0.1));
  CHECK(ccn.eta()[0] == Catch::Approx(0.22).margin(1e-15));
  CHECK(ccn.eta()[1] == Catch::Approx(0.58).margin(1e-15));
  CHECK(ccn.base_rate() == Catch::Approx(0.4).margin(1e-15));

  CHECK_THROWS_AS(corrupt_distribution(dist, NoiseModel::ccn(0.6, 0.5)), std::runtime_error);
}

TEST_CASE("admissibility reports name the violating atoms") {
  auto dist = DiscreteDistribution::from_scalars({0.0, 1.0, 2.0}, {0.25, 0.5, 0.25},
                                                 {0.1, 0.5, 0.9});
  auto everywhere = validate_admissible(NoiseModel::ccn(0.6, 0.5), dist);
  CHECK(everywhere.violations.size() == 3);

  auto fine = validate_admissible(NoiseModel::sln(0.49), dist);
  CHECK(fine.ok());

  // instance-dependent noise hitting exactly 1/2 at one atom
  auto idn = NoiseModel::idn([](std::span<const double> x) { return x[0] == 1.0 ? 0.5 : 0.1; });
  auto partial = validate_admissible(idn, dist);
  REQUIRE(partial.violations.size() == 1);
  CHECK(partial.violations[0].index == 1);
}

TEST_CASE("boundary-consistent conditions on a probe grid") {
  auto grid = probe_grid(-4.0, 4.0);
  std::vector<double> eta(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) eta[i] = logistic(grid[i]);

  SECTION("constants pass all three conditions") {
    auto report = validate_bcn_plus(constant_flip(0.1), constant_flip(0.3), grid, eta);
    CHECK(report.ok());
  }
  SECTION("step difference construction breaks the difference condition") {
    auto report = validate_bcn_plus(step_flip(0.5), constant_flip(0.0), grid, eta);
    CHECK_FALSE(report.ok());
    CHECK(report.difference_violation.has_value());
    CHECK_FALSE(report.order_violation.has_value());
  }
  SECTION("symmetric sigmoid-abs flips pass") {
    auto report = validate_bcn_plus(sigmoid_abs_flip(1.0), sigmoid_abs_flip(1.0), grid, eta);
    CHECK(report.ok());
  }
  SECTION("non order-preserving eta is caught") {
    std::vector<double> bad_eta = eta;
    std::reverse(bad_eta.begin(), bad_eta.end());
    auto report = validate_bcn_plus(constant_flip(0.1), constant_flip(0.1), grid, bad_eta);
    CHECK(report.order_violation.has_value());
  }
}

TEST_CASE("corrupted threshold") {
  // instance-dependent: the 1/2 threshold is preserved for every flip value
  for (double f : {0.0, 0.1, 0.2, 0.3, 0.49}) {
    CHECK(corrupted_threshold(0.5, f, f) == Catch::Approx(0.5).margin(1e-15));
  }
  CHECK(corrupted_threshold(0.3, 0.2, 0.2) == Catch::Approx(0.38).margin(1e-15));
  // general form (1 - rp - rn) t + rn
  CHECK(corrupted_threshold(0.3, 0.1, 0.2) == Catch::Approx(0.41).margin(1e-15));
  CHECK_THROWS_AS(corrupted_threshold(0.3, 0.7, 0.4), std::runtime_error);
}

TEST_CASE("flip probability matches its closed form and a simulation") {
  CHECK(flip_probability(0.42, 0.0, 0.0) == 0.0);
  CHECK(flip_probability(0.5, 0.4, 0.2) == Catch::Approx(0.3).margin(1e-15));

  // frequency of disagreements at a fixed atom
  auto dist = DiscreteDistribution::from_scalars({0.0}, {1.0}, {0.7});
  auto model = NoiseModel::ccn(0.25, 0.1);
  const std::size_t n = 100000;
  auto sample = sample_clean(dist, n, 5);
  auto noisy = corrupt_sample(sample, model, 6);
  double flips = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (noisy.y[i] != sample.y[i]) flips += 1.0;
  flips /= double(n);
  double expected = flip_probability(0.7, 0.25, 0.1);
  double ci = 2.576 * std::sqrt(expected * (1.0 - expected) / double(n));
  REQUIRE(std::abs(flips - expected) <= 1.5 * ci);
}

TEST_CASE("corrupted link closed forms") {
  LinkFn u = [](double z) { return logistic(z); };

  SECTION("zero flips reproduce the link") {
    for (double z = -3.0; z <= 3.0; z += 0.1)
      CHECK(corrupted_link(u, constant_flip(0.0), constant_flip(0.0), z) ==
            Catch::Approx(u(z)).margin(1e-15));
  }
  SECTION("constants scale and translate the link") {
    const double a = 0.2, b = 0.15;
    for (double z = -3.0; z <= 3.0; z += 0.1)
      CHECK(corrupted_link(u, constant_flip(b), constant_flip(a), z) ==
            Catch::Approx((1.0 - a - b) * u(z) + b).margin(1e-14));
  }
  SECTION("separable link with symmetric boundary noise becomes a glm") {
    LinkFn step = [](double z) { return z > 0.0 ? 1.0 : 0.0; };
    auto g = [](double z) { return 1.0 / (1.0 + std::exp(z)); };
    FlipFn f = sigmoid_abs_flip(1.0);  // f(z) = g(|z|), even
    for (double z = -4.0; z <= 4.0; z += 0.05) {
      // at the boundary itself 2 f(0) = 1, which the total-noise bound excludes
      if (std::abs(z) < 0.02) continue;
      CHECK(corrupted_link(step, f, f, z) == Catch::Approx(g(-z)).margin(1e-14));
    }
  }
}

TEST_CASE("corrupted eta difference bound on boundary-consistent configs") {
  // For s(x) <= s(x') the difference eta_bar(x) - eta_bar(x') is bounded by
  // one of the two single-atom weightings of eta(x) - eta(x'), i.e. by their
  // maximum (which for a non-positive eta difference is the smaller weight).
  Rng rng(2027);
  for (int rep = 0; rep < 1000; ++rep) {
    auto cfg = oracle::random_bcn_plus(rng);
    auto eta_bar = cfg.eta_bar();
    for (std::size_t i = 0; i < cfg.size(); ++i) {
      for (std::size_t j = i; j < cfg.size(); ++j) {
        // scores ascending: s(x_i) <= s(x_j)
        double wi = 1.0 - cfg.f_neg[i] - cfg.f_pos[i];
        double wj = 1.0 - cfg.f_neg[j] - cfg.f_pos[j];
        double d_eta = cfg.eta[i] - cfg.eta[j];
        double bound = std::max(wi * d_eta, wj * d_eta);
        REQUIRE(eta_bar[i] - eta_bar[j] <= bound + 1e-12);
      }
    }
  }
}

TEST_CASE("the max-weighted form of the difference bound is not universal") {
  // Admissible configuration on two atoms where eta crosses 1/2 between the
  // scores: the symmetric flip table (0.3012, 0.2735) is non-increasing from
  // the crossing atom on, yet
  //   eta_bar(x) - eta_bar(x') > max(w, w') (eta(x) - eta(x'))
  // where w = 1 - rho_neg - rho_pos. Only the one-sided bounds survive.
  const double eta0 = 0.0268, eta1 = 0.5565;
  const double f0 = 0.3012, f1 = 0.2735;
  auto grid = std::vector<double>{-2.5478, -2.5273};
  auto report = validate_bcn_plus([&](double z) { return z < -2.53 ? f0 : f1; },
                                  [&](double z) { return z < -2.53 ? f0 : f1; }, grid,
                                  {eta0, eta1});
  REQUIRE(report.ok());

  double bar0 = corrupted_eta(eta0, f0, f0);
  double bar1 = corrupted_eta(eta1, f1, f1);
  double w0 = 1.0 - 2.0 * f0, w1 = 1.0 - 2.0 * f1;
  double d_eta = eta0 - eta1;
  CHECK(bar0 - bar1 > std::max(w0, w1) * d_eta + 1e-6);          // stated form fails
  CHECK(bar0 - bar1 <= std::max(w0 * d_eta, w1 * d_eta) + 1e-12);  // proof form holds
  // order preservation itself is intact
  CHECK(bar0 < bar1);
}

TEST_CASE("class-conditional corruption scales eta differences exactly") {
  Rng rng(2028);
  for (int rep = 0; rep < 1000; ++rep) {
    double a = rng.uniform(0.0, 0.6);
    double b = rng.uniform(0.0, 0.89 - a);
    double e1 = rng.uniform();
    double e2 = rng.uniform();
    double lhs = corrupted_eta(e1, a, b) - corrupted_eta(e2, a, b);
    REQUIRE(lhs == Catch::Approx((1.0 - a - b) * (e1 - e2)).margin(1e-12));
  }
}

TEST_CASE("instance-dependent noise preserves the sign around one half") {
  Rng rng(2029);
  for (int rep = 0; rep < 1000; ++rep) {
    double eta = rng.uniform();
    if (std::abs(eta - 0.5) < 1e-9) continue;
    double f = rng.uniform(0.0, 0.499);
    double bar = corrupted_eta(eta, f, f);
    REQUIRE(((eta > 0.5) == (bar > 0.5)));
  }
}

TEST_CASE("label swapping with even flip functions mirrors the corruption") {
  Rng rng(2030);
  for (int rep = 0; rep < 1000; ++rep) {
    // even flip functions of the score
    double hp = rng.uniform(0.05, 0.45), wp = rng.uniform(0.3, 3.0);
    double hn = rng.uniform(0.05, 0.45), wn = rng.uniform(0.3, 3.0);
    FlipFn f_pos = [hp, wp](double z) { return hp * std::exp(-wp * z * z); };
    FlipFn f_neg = [hn, wn](double z) { return hn * std::exp(-wn * z * z); };
    double z = rng.uniform(-3.0, 3.0);
    double eta = rng.uniform();
    double bar = corrupted_eta(eta, f_pos(z), f_neg(z));
    // swapped labels, swapped flip roles, negated score
    double bar_swapped = corrupted_eta(1.0 - eta, f_neg(-z), f_pos(-z));
    REQUIRE(bar_swapped == Catch::Approx(1.0 - bar).margin(1e-12));
  }
}

TEST_CASE("corrupted class-conditionals decompose the marginal") {
  Rng rng(2031);
  for (int rep = 0; rep < 200; ++rep) {
    auto cfg = oracle::random_bcn_plus(rng);
    auto clean = cfg.clean();
    auto corrupted = cfg.corrupted();
    double pi = clean.base_rate();
    double pi_bar = corrupted.base_rate();
    for (std::size_t i = 0; i < cfg.size(); ++i) {
      double rp = cfg.f_pos[i], rn = cfg.f_neg[i];
      double p_bar_formula =
          ((1.0 - rp) * pi * clean.p_cond(i) + rn * (1.0 - pi) * clean.q_cond(i)) / pi_bar;
      double q_bar_formula =
          (rp * pi * clean.p_cond(i) + (1.0 - rn) * (1.0 - pi) * clean.q_cond(i)) /
          (1.0 - pi_bar);
      REQUIRE(corrupted.p_cond(i) == Catch::Approx(p_bar_formula).margin(1e-12));
      REQUIRE(corrupted.q_cond(i) == Catch::Approx(q_bar_formula).margin(1e-12));
      double recomposed = pi_bar * corrupted.p_cond(i) + (1.0 - pi_bar) * corrupted.q_cond(i);
      REQUIRE(recomposed == Catch::Approx(clean.marginal()[i]).margin(1e-12));
    }
  }
}

TEST_CASE("noise model kinds carry their structure") {
  auto byln = NoiseModel::byln(sigmoid_abs_flip(2.0),
                               [](std::span<const double> x) { return x[0]; });
  CHECK(byln.kind() == NoiseKind::byln);
  CHECK(byln.score_mediated());
  Vec x{1.5};
  CHECK(byln.rho_pos(x) == byln.rho_neg(x));
  CHECK(byln.rho_pos(x) == Catch::Approx(1.0 / (1.0 + std::exp(3.0))).margin(1e-15));

  auto sin = NoiseModel::sin_model(constant_flip(0.1), constant_flip(0.2), {1.0, -1.0});
  Vec x2{2.0, 0.5};
  CHECK(sin.score(x2) == Catch::Approx(1.5));
  CHECK(sin.rho_pos(x2) == 0.2);
  CHECK(sin.rho_neg(x2) == 0.1);

  auto ptn = NoiseModel::ptn(constant_flip(0.1), constant_flip(0.1),
                             [](std::span<const double> x) { return logistic(x[0]); });
  CHECK(ptn.kind() == NoiseKind::ptn);
  CHECK(ptn.score(x) == Catch::Approx(logistic(1.5)));
}

TEST_CASE("the noise kinds reduce to one another as documented") {
  Rng rng(2032);
  auto score = [](std::span<const double> x) { return 0.7 * x[0] - 0.2; };
  FlipFn f = sigmoid_abs_flip(1.3);
  auto byln = NoiseModel::byln(f, score);
  auto bcn_sym = NoiseModel::bcn(f, f, score);
  auto idn = NoiseModel::idn([f, score](std::span<const double> x) { return f(score(x)); });
  auto sln = NoiseModel::sln(0.2);
  auto ccn_sym = NoiseModel::ccn(0.2, 0.2);
  auto ptn_const = NoiseModel::ptn(constant_flip(0.1), constant_flip(0.3),
                                   [](std::span<const double> x) { return logistic(x[0]); });
  auto ccn = NoiseModel::ccn(0.3, 0.1);
  for (int rep = 0; rep < 200; ++rep) {
    Vec x{rng.uniform(-3.0, 3.0)};
    // symmetric boundary noise == boundary noise with equal flips == the
    // instance-dependent model built from their composition
    CHECK(byln.rho_pos(x) == bcn_sym.rho_pos(x));
    CHECK(byln.rho_neg(x) == bcn_sym.rho_neg(x));
    CHECK(byln.rho_pos(x) == idn.rho_pos(x));
    CHECK(idn.rho_pos(x) == idn.rho_neg(x));
    // symmetric constant noise == class-conditional with equal constants
    CHECK(sln.rho_pos(x) == ccn_sym.rho_pos(x));
    CHECK(sln.rho_neg(x) == ccn_sym.rho_neg(x));
    // probability-mediated constants == class-conditional constants
    CHECK(ptn_const.rho_pos(x) == ccn.rho_pos(x));
    CHECK(ptn_const.rho_neg(x) == ccn.rho_neg(x));
  }
}
