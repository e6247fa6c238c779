#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "labelnoise/core.hpp"
#include "labelnoise/metrics.hpp"
#include "labelnoise/noise.hpp"
#include "labelnoise/rng.hpp"

// Randomized empirical verification of the identities and inequalities the
// library relies on, carried out on finite discrete distributions where every
// expectation is an exact sum. Violations below kSlackTol are treated as
// floating-point noise.
namespace labelnoise::oracle {

inline constexpr double kSlackTol = 1e-10;

struct CheckReport {
  std::string name;
  int trials = 0;
  int failures = 0;
  double max_violation = 0.0;   // largest observed breach (0 when clean)
  double tightest_slack = std::numeric_limits<double>::infinity();
  std::string first_failure;    // replay info for the first failing trial
  bool passed() const { return failures == 0; }

  void record(double violation, double slack, int trial, std::uint64_t seed,
              const std::string& what) {
    tightest_slack = std::min(tightest_slack, slack);
    if (violation > kSlackTol) {
      ++failures;
      max_violation = std::max(max_violation, violation);
      if (first_failure.empty()) {
        std::ostringstream os;
        os << what << " (trial " << trial << ", seed " << seed << ")";
        first_failure = os.str();
      }
    }
  }

  nlohmann::json to_json() const {
    nlohmann::json j{{"name", name},
                     {"trials", trials},
                     {"pass", passed()},
                     {"failures", failures},
                     {"max_violation", max_violation}};
    if (std::isfinite(tightest_slack)) j["tightest_slack"] = tightest_slack;
    if (!first_failure.empty()) j["first_failure"] = first_failure;
    return j;
  }
};

// --- random problem generators ---------------------------------------------

// Random finite distribution with k atoms; the single feature of atom i is i.
inline DiscreteDistribution random_distribution(Rng& rng, std::size_t k) {
  Vec points(k), marginal(k), eta(k);
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    points[i] = static_cast<double>(i);
    marginal[i] = 0.05 + rng.uniform();
    total += marginal[i];
  }
  for (auto& m : marginal) m /= total;
  for (std::size_t i = 0; i < k; ++i) eta[i] = rng.uniform(0.02, 0.98);
  return DiscreteDistribution::from_scalars(points, std::move(marginal), std::move(eta));
}

// Nonzero scores, one per atom.
inline Vec random_scores(Rng& rng, std::size_t k) {
  Vec s(k);
  for (auto& v : s) {
    v = rng.uniform(-2.0, 2.0);
    if (std::abs(v) < 0.05) v = v < 0.0 ? -0.05 : 0.05;
  }
  return s;
}

// Instance-dependent flip probabilities f(x) strictly below 1/2.
inline Vec random_idn(Rng& rng, std::size_t k, double max_rho = 0.45) {
  Vec f(k);
  for (auto& v : f) v = rng.uniform(0.0, max_rho);
  return f;
}

struct IlnTables {
  Vec rho_pos, rho_neg;
};

inline IlnTables random_iln(Rng& rng, std::size_t k, double max_total = 0.9) {
  IlnTables t;
  t.rho_pos.resize(k);
  t.rho_neg.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    double total = rng.uniform(0.0, max_total);
    double split = rng.uniform();
    t.rho_pos[i] = total * split;
    t.rho_neg[i] = total * (1.0 - split);
  }
  return t;
}

// A boundary-consistent configuration on a finite score grid: ascending
// scores, a non-decreasing eta table, and flip tables satisfying the
// admissibility conditions (unimodal around the eta = 1/2 crossing,
// non-increasing difference, bounded total noise).
struct BcnPlusConfig {
  Vec scores;
  Vec marginal;
  Vec eta;
  Vec f_neg, f_pos;

  std::size_t size() const { return scores.size(); }

  DiscreteDistribution clean() const {
    return DiscreteDistribution::from_scalars(scores, marginal, eta);
  }
  Vec eta_bar() const {
    Vec out(size());
    for (std::size_t i = 0; i < size(); ++i)
      out[i] = corrupted_eta(eta[i], f_pos[i], f_neg[i]);
    return out;
  }
  DiscreteDistribution corrupted() const {
    return DiscreteDistribution::from_scalars(scores, marginal, eta_bar());
  }
  // Largest total flip probability over atoms, halved.
  double rho_max() const {
    double m = 0.0;
    for (std::size_t i = 0; i < size(); ++i) m = std::max(m, f_pos[i] + f_neg[i]);
    return 0.5 * m;
  }
};

namespace detail {

// Unimodal table: non-decreasing up to index peak (inclusive), then
// non-increasing; values in [0, height].
inline Vec unimodal_table(Rng& rng, std::size_t k, std::ptrdiff_t peak, double height) {
  Vec f(k);
  std::ptrdiff_t p = std::clamp<std::ptrdiff_t>(peak, -1, static_cast<std::ptrdiff_t>(k) - 1);
  std::size_t left = static_cast<std::size_t>(p + 1);
  for (std::size_t i = 0; i < left; ++i) f[i] = rng.uniform(0.0, height);
  std::sort(f.begin(), f.begin() + left);
  double cap = left > 0 ? f[left - 1] : height;
  for (std::size_t i = left; i < k; ++i) f[i] = rng.uniform(0.0, cap);
  std::sort(f.begin() + left, f.end(), std::greater<double>());
  return f;
}

inline bool unimodal_around(const Vec& f, std::ptrdiff_t peak) {
  for (std::size_t i = 1; i < f.size(); ++i) {
    bool ascending = static_cast<std::ptrdiff_t>(i) <= peak;
    if (ascending && f[i] < f[i - 1] - 1e-15) return false;
    if (!ascending && f[i] > f[i - 1] + 1e-15) return false;
  }
  return true;
}

}  // namespace detail

// Constructive sampler: direct draws of admissible configurations, with
// rejection only for the asymmetric flavour (unconstrained draws almost never
// satisfy all conditions at once).
inline BcnPlusConfig random_bcn_plus(Rng& rng, std::size_t max_atoms = 16) {
  BcnPlusConfig cfg;
  const std::size_t k = 2 + rng.below(max_atoms - 1);
  cfg.scores.resize(k);
  cfg.marginal.resize(k);
  cfg.eta.resize(k);
  for (std::size_t i = 0; i < k; ++i) cfg.scores[i] = rng.uniform(-3.0, 3.0);
  std::sort(cfg.scores.begin(), cfg.scores.end());
  double total = 0.0;
  for (auto& m : cfg.marginal) {
    m = 0.05 + rng.uniform();
    total += m;
  }
  for (auto& m : cfg.marginal) m /= total;
  for (auto& e : cfg.eta) e = rng.uniform(0.01, 0.99);
  std::sort(cfg.eta.begin(), cfg.eta.end());

  // eta = 1/2 crossing: last index with eta <= 1/2 (-1 when none)
  std::ptrdiff_t crossing = -1;
  for (std::size_t i = 0; i < k; ++i)
    if (cfg.eta[i] <= 0.5) crossing = static_cast<std::ptrdiff_t>(i);

  switch (rng.below(3)) {
    case 0: {  // symmetric flip functions
      double h = rng.uniform(0.02, 0.45);
      cfg.f_neg = detail::unimodal_table(rng, k, crossing, h);
      cfg.f_pos = cfg.f_neg;
      break;
    }
    case 1: {  // class-conditional constants
      double a = rng.uniform(0.0, 0.6);
      double b = rng.uniform(0.0, 0.9 - a);
      cfg.f_pos.assign(k, a);
      cfg.f_neg.assign(k, b);
      break;
    }
    default: {  // asymmetric: f_pos = f_neg + non-increasing difference
      for (int attempt = 0; attempt < 200; ++attempt) {
        double h = rng.uniform(0.05, 0.3);
        cfg.f_neg = detail::unimodal_table(rng, k, crossing, h);
        Vec delta(k);
        for (auto& d : delta) d = rng.uniform(-0.15, 0.15);
        std::sort(delta.begin(), delta.end(), std::greater<double>());
        cfg.f_pos.resize(k);
        bool ok = true;
        for (std::size_t i = 0; i < k; ++i) {
          cfg.f_pos[i] = cfg.f_neg[i] + delta[i];
          if (cfg.f_pos[i] < 0.0 || cfg.f_pos[i] > 1.0 ||
              cfg.f_pos[i] + cfg.f_neg[i] > 0.9) {
            ok = false;
            break;
          }
        }
        if (ok && detail::unimodal_around(cfg.f_pos, crossing)) return cfg;
      }
      // fall back to the symmetric flavour
      double h = rng.uniform(0.02, 0.45);
      cfg.f_neg = detail::unimodal_table(rng, k, crossing, h);
      cfg.f_pos = cfg.f_neg;
    }
  }
  return cfg;
}

// --- checks -----------------------------------------------------------------

// Under instance-dependent noise and a loss whose partials sum to C, the clean
// risk equals the weighted corrupted risk plus a scorer-independent constant,
// with weight 1/(1 - 2 f(x)); the constant is -C E[f / (1 - 2 f)].
inline CheckReport check_risk_identity(int trials, std::uint64_t seed = 0xabc0) {
  CheckReport report;
  report.name = "risk_identity";
  report.trials = trials;
  const Loss loss = losses::zero_one();
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng(seed).stream(static_cast<std::uint64_t>(t));
    const std::size_t k = 2 + rng.below(15);
    auto dist = random_distribution(rng, k);
    Vec f = random_idn(rng, k);
    Vec eta_bar(k), weights(k);
    double expected_const = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      eta_bar[i] = corrupted_eta(dist.eta()[i], f[i], f[i]);
      weights[i] = 1.0 / (1.0 - 2.0 * f[i]);
      expected_const -= *loss.symmetric_sum * dist.marginal()[i] * f[i] / (1.0 - 2.0 * f[i]);
    }
    DiscreteDistribution corrupted =
        DiscreteDistribution::from_scalars(Vec(dist.size(), 0.0), dist.marginal(), eta_bar);
    double worst = 0.0;
    for (int s = 0; s < 10; ++s) {
      Vec scores = random_scores(rng, k);
      double clean = risk(scores, dist, loss);
      double weighted = weighted_risk(scores, corrupted, loss, weights);
      worst = std::max(worst, std::abs(clean - weighted - expected_const));
    }
    report.record(worst, kSlackTol - worst, t, seed, "risk identity drifted across scorers");
  }
  return report;
}

// Per-atom minimizers of the conditional risk agree between the clean and
// corrupted class-probabilities for symmetric-sum losses under
// instance-dependent noise (atoms at eta = 1/2 are indifferent).
inline CheckReport check_bayes_coincide(int trials, std::uint64_t seed = 0xabc1) {
  CheckReport report;
  report.name = "bayes_coincide";
  report.trials = trials;
  const Loss zo = losses::zero_one();
  const Loss uh = losses::unhinged();
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng(seed).stream(static_cast<std::uint64_t>(t));
    const std::size_t k = 2 + rng.below(15);
    auto dist = random_distribution(rng, k);
    Vec f = random_idn(rng, k);
    double violations = 0.0;
    double slack = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
      double eta = dist.eta()[i];
      if (std::abs(eta - 0.5) < 1e-9) continue;
      double eta_bar = corrupted_eta(eta, f[i], f[i]);
      slack = std::min(slack, std::abs(eta_bar - 0.5));
      for (const Loss* loss : {&zo, &uh}) {
        auto cond = [&](double e, double v) {
          return e * loss->pos(v) + (1.0 - e) * loss->neg(v);
        };
        int clean_best = cond(eta, 1.0) <= cond(eta, -1.0) ? 1 : -1;
        int corrupt_best = cond(eta_bar, 1.0) <= cond(eta_bar, -1.0) ? 1 : -1;
        if (clean_best != corrupt_best) violations += 1.0;
      }
    }
    report.record(violations, slack, t, seed, "clean/corrupted conditional minimizers differ");
  }
  return report;
}

// Clean zero-one regret is bounded by the corrupted one scaled by
// 1/(1 - 2 rho_max); the interpolated variant multiplies in R^a (E[w])^a and
// relaxes the rho_max exponent to 1 - a.
inline CheckReport check_regret_bound(int trials, std::uint64_t seed = 0xabc2) {
  CheckReport report;
  report.name = "regret_bound";
  report.trials = trials;
  const Loss loss = losses::zero_one();
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng(seed).stream(static_cast<std::uint64_t>(t));
    const std::size_t k = 2 + rng.below(15);
    auto dist = random_distribution(rng, k);
    Vec f = random_idn(rng, k);
    Vec eta_bar(k);
    double rho_max = 0.0;
    double mean_weight = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      eta_bar[i] = corrupted_eta(dist.eta()[i], f[i], f[i]);
      rho_max = std::max(rho_max, f[i]);
      mean_weight += dist.marginal()[i] / (1.0 - 2.0 * f[i]);
    }
    DiscreteDistribution corrupted =
        DiscreteDistribution::from_scalars(Vec(dist.size(), 0.0), dist.marginal(), eta_bar);
    Vec scores = random_scores(rng, k);
    double reg_clean = regret(scores, dist, loss);
    double reg_corrupt = regret(scores, corrupted, loss);
    double m_factor = 1.0 / (1.0 - 2.0 * rho_max);
    double worst = reg_clean - m_factor * reg_corrupt;
    double slack = m_factor * reg_corrupt - reg_clean;
    const double r_bound = 1.0;  // bounded conditional regret for zero-one
    for (double a : {0.0, 0.25, 0.5, 1.0}) {
      double rhs = std::pow(m_factor, 1.0 - a) * std::pow(r_bound, a) *
                   std::pow(mean_weight, a) * std::pow(reg_corrupt, 1.0 - a);
      worst = std::max(worst, reg_clean - rhs);
      slack = std::min(slack, rhs - reg_clean);
    }
    report.record(worst, slack, t, seed, "clean regret exceeded corrupted-regret bound");
  }
  return report;
}

// eta(x) > t holds exactly when eta_bar(x) clears the shifted threshold
// (1 - rho_pos - rho_neg) t + rho_neg; under instance-dependent noise the
// t = 1/2 threshold is unchanged.
inline CheckReport check_threshold_shift(int trials, std::uint64_t seed = 0xabc3) {
  CheckReport report;
  report.name = "threshold_shift";
  report.trials = trials;
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng(seed).stream(static_cast<std::uint64_t>(t));
    const std::size_t k = 2 + rng.below(15);
    auto dist = random_distribution(rng, k);
    auto tables = random_iln(rng, k);
    double threshold = rng.uniform(0.02, 0.98);
    double violations = 0.0;
    double slack = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
      double eta = dist.eta()[i];
      if (std::abs(eta - threshold) < 1e-9) continue;
      double eta_bar = corrupted_eta(eta, tables.rho_pos[i], tables.rho_neg[i]);
      double shifted = corrupted_threshold(threshold, tables.rho_pos[i], tables.rho_neg[i]);
      if ((eta > threshold) != (eta_bar > shifted)) violations += 1.0;
      slack = std::min(slack, std::abs(eta_bar - shifted));
      // instance-dependent specialization: the 1/2 threshold is preserved
      double f = 0.5 * (tables.rho_pos[i] + tables.rho_neg[i]);
      if (f < 0.5 - kAdmissibleMargin) {
        double half = corrupted_threshold(0.5, f, f);
        violations = std::max(violations, std::abs(half - 0.5) > 1e-15 ? 1.0 : 0.0);
      }
    }
    report.record(violations, slack, t, seed, "threshold equivalence failed at an atom");
  }
  return report;
}

// Under boundary-consistent noise the corrupted class-probability preserves
// the order of the clean one; under class-conditional constants the
// difference is exactly (1 - a - b)(eta - eta').
inline CheckReport check_order_preservation(int trials, std::uint64_t seed = 0xabc4) {
  CheckReport report;
  report.name = "order_preservation";
  report.trials = trials;
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng(seed).stream(static_cast<std::uint64_t>(t));
    auto cfg = random_bcn_plus(rng);
    Vec eta_bar = cfg.eta_bar();
    double worst = 0.0;
    double slack = std::numeric_limits<double>::infinity();
    bool ccn = true;
    for (std::size_t i = 1; i < cfg.size(); ++i)
      ccn = ccn && cfg.f_pos[i] == cfg.f_pos[0] && cfg.f_neg[i] == cfg.f_neg[0];
    for (std::size_t i = 0; i < cfg.size(); ++i) {
      for (std::size_t j = i + 1; j < cfg.size(); ++j) {
        if (cfg.eta[j] <= cfg.eta[i] + 1e-15) continue;  // vacuous pair
        worst = std::max(worst, eta_bar[i] - eta_bar[j]);
        slack = std::min(slack, eta_bar[j] - eta_bar[i]);
        if (ccn) {
          double expected = (1.0 - cfg.f_pos[0] - cfg.f_neg[0]) * (cfg.eta[i] - cfg.eta[j]);
          worst = std::max(worst, std::abs((eta_bar[i] - eta_bar[j]) - expected) - 1e-12);
        }
      }
    }
    report.record(worst, slack, t, seed, "corrupted eta reversed a strict eta order");
  }
  return report;
}

// Clean ranking regret is bounded by the corrupted one times
// [pi_bar (1 - pi_bar) / (pi (1 - pi))] / (1 - 2 rho_max); equality holds for
// class-conditional constants.
inline CheckReport check_auc_bound(int trials, std::uint64_t seed = 0xabc5) {
  CheckReport report;
  report.name = "auc_bound";
  report.trials = trials;
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng(seed).stream(static_cast<std::uint64_t>(t));
    auto cfg = random_bcn_plus(rng);
    auto clean = cfg.clean();
    auto corrupted = cfg.corrupted();
    Vec scores = random_scores(rng, cfg.size());
    double reg_clean = ranking_regret(scores, clean);
    double reg_corrupt = ranking_regret(scores, corrupted);
    double pi = clean.base_rate();
    double pi_bar = corrupted.base_rate();
    double factor = (pi_bar * (1.0 - pi_bar)) / (pi * (1.0 - pi));
    double rhs = factor / (1.0 - 2.0 * cfg.rho_max()) * reg_corrupt;
    double worst = reg_clean - rhs;
    double slack = rhs - reg_clean;
    bool ccn = true;
    for (std::size_t i = 1; i < cfg.size(); ++i)
      ccn = ccn && cfg.f_pos[i] == cfg.f_pos[0] && cfg.f_neg[i] == cfg.f_neg[0];
    if (ccn) {
      double exact = factor / (1.0 - cfg.f_pos[0] - cfg.f_neg[0]) * reg_corrupt;
      worst = std::max(worst, std::abs(reg_clean - exact) - 1e-12);
    }
    report.record(worst, slack, t, seed, "clean ranking regret exceeded the bound");
  }
  return report;
}

// The corrupted link of Lipschitz pieces is Lipschitz with constant at most
// L + L_neg + L_pos, estimated on a dense grid.
inline CheckReport check_sim_closure(int trials, std::uint64_t seed = 0xabc6) {
  CheckReport report;
  report.name = "sim_closure";
  report.trials = trials;
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng(seed).stream(static_cast<std::uint64_t>(t));
    double center = rng.uniform(-1.0, 1.0);
    double link_lip = rng.uniform(0.2, 3.0);
    LinkFn u = [center, link_lip](double z) {
      return std::clamp(0.5 + link_lip * (z - center), 0.0, 1.0);
    };
    FlipFn f_neg, f_pos;
    double flip_lip_total;
    if (rng.bernoulli(0.5)) {
      double h = rng.uniform(0.05, 0.45);
      double flip_lip = rng.uniform(0.1, 2.0);
      FlipFn f = [center, h, flip_lip](double z) {
        return std::max(0.0, h - flip_lip * std::abs(z - center));
      };
      f_neg = f;
      f_pos = f;
      flip_lip_total = 2.0 * flip_lip;
    } else {
      double a = rng.uniform(0.0, 0.6);
      double b = rng.uniform(0.0, 0.89 - a);
      f_pos = constant_flip(a);
      f_neg = constant_flip(b);
      flip_lip_total = 0.0;
    }
    const double bound = link_lip + flip_lip_total + 1e-6;
    const int grid = 4001;
    double prev = corrupted_link(u, f_neg, f_pos, center - 4.0);
    double max_slope = 0.0;
    double step = 8.0 / (grid - 1);
    for (int i = 1; i < grid; ++i) {
      double z = center - 4.0 + step * i;
      double cur = corrupted_link(u, f_neg, f_pos, z);
      max_slope = std::max(max_slope, std::abs(cur - prev) / step);
      prev = cur;
    }
    report.record(max_slope - bound, bound - max_slope, t, seed,
                  "corrupted link exceeded its Lipschitz bound");
  }
  return report;
}

// --- counterexample finders -------------------------------------------------

// Without the non-increasing-difference condition, boundary-consistent noise
// can reverse the order: take f_pos == 0, f_neg(z) = a 1{z <= 0} and a
// logistic link, then scan symmetric score pairs for a reversal.
struct OrderViolationWitness {
  double z = 0.0, z_prime = 0.0;
  double u_z = 0.0, u_z_prime = 0.0;
  double phi_z = 0.0, phi_z_prime = 0.0;
  bool found = false;
};

inline OrderViolationWitness find_order_violation(double a = 0.5) {
  FlipFn f_pos = [](double) { return 0.0; };
  FlipFn f_neg = step_flip(a);
  LinkFn u = [](double z) { return logistic(z); };
  OrderViolationWitness w;
  for (int i = 1; i <= 100; ++i) {
    double z = -0.01 * i;
    double zp = 0.01 * i;
    double phi = corrupted_link(u, f_neg, f_pos, z);
    double phi_p = corrupted_link(u, f_neg, f_pos, zp);
    if (u(z) < u(zp) && phi > phi_p + 1e-12) {
      w = {z, zp, u(z), u(zp), phi, phi_p, true};
      break;
    }
  }
  return w;
}

// Instance-dependent noise with f = eta / 2 is admissible yet not order
// preserving: eta_bar = eta (3/2 - eta) decreases beyond eta = 3/4.
struct IdnOrderWitness {
  double eta_x = 0.0, eta_x_prime = 0.0;
  double eta_bar_x = 0.0, eta_bar_x_prime = 0.0;
  bool found = false;
};

inline IdnOrderWitness check_idn_order_failure() {
  IdnOrderWitness w;
  for (int i = 1; i < 19; ++i) {
    double eta = 0.05 * i;
    double eta_next = 0.05 * (i + 1);
    double bar = corrupted_eta(eta, 0.5 * eta, 0.5 * eta);
    double bar_next = corrupted_eta(eta_next, 0.5 * eta_next, 0.5 * eta_next);
    if (bar > bar_next + 1e-12) {
      w = {eta, eta_next, bar, bar_next, true};
      break;
    }
  }
  return w;
}

// --- aggregation ------------------------------------------------------------

inline nlohmann::json run_all(int trials, std::uint64_t seed = 0xabc'0000) {
  nlohmann::json out;
  out["trials"] = trials;
  nlohmann::json checks = nlohmann::json::array();
  bool all = true;
  for (const CheckReport& r :
       {check_risk_identity(trials, seed ^ 0x1), check_bayes_coincide(trials, seed ^ 0x2),
        check_regret_bound(trials, seed ^ 0x3), check_threshold_shift(trials, seed ^ 0x4),
        check_order_preservation(trials, seed ^ 0x5), check_auc_bound(trials, seed ^ 0x6),
        check_sim_closure(trials, seed ^ 0x7)}) {
    checks.push_back(r.to_json());
    all = all && r.passed();
  }

  auto order_witness = find_order_violation();
  checks.push_back({{"name", "order_violation_witness"},
                    {"pass", order_witness.found},
                    {"witness",
                     {{"z", order_witness.z},
                      {"z_prime", order_witness.z_prime},
                      {"phi_z", order_witness.phi_z},
                      {"phi_z_prime", order_witness.phi_z_prime}}}});
  all = all && order_witness.found;

  auto idn_witness = check_idn_order_failure();
  checks.push_back({{"name", "idn_order_failure_witness"},
                    {"pass", idn_witness.found},
                    {"witness",
                     {{"eta_x", idn_witness.eta_x},
                      {"eta_x_prime", idn_witness.eta_x_prime},
                      {"eta_bar_x", idn_witness.eta_bar_x},
                      {"eta_bar_x_prime", idn_witness.eta_bar_x_prime}}}});
  all = all && idn_witness.found;

  out["checks"] = checks;
  out["all_passed"] = all;
  return out;
}

}  // namespace labelnoise::oracle
