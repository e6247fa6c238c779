#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "labelnoise/core.hpp"

namespace labelnoise {

// Total-noise bound rho_pos + rho_neg < 1, enforced with a floating-point
// safety margin.
inline constexpr double kAdmissibleMargin = 1e-9;

inline bool admissible_pair(double rho_pos, double rho_neg) {
  return rho_pos >= 0.0 && rho_neg >= 0.0 && rho_pos + rho_neg <= 1.0 - kAdmissibleMargin;
}

inline void require_admissible(double rho_pos, double rho_neg, const char* where) {
  if (!admissible_pair(rho_pos, rho_neg)) {
    std::ostringstream msg;
    msg << where << ": inadmissible flip probabilities rho_pos=" << rho_pos
        << " rho_neg=" << rho_neg << " (need rho_pos + rho_neg < 1)";
    throw std::runtime_error(msg.str());
  }
}

// Corrupted class-probability for one instance:
//   eta_bar = (1 - rho_pos) * eta + rho_neg * (1 - eta).
inline double corrupted_eta(double eta, double rho_pos, double rho_neg) {
  if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("corrupted_eta: eta outside [0,1]");
  if (rho_pos < 0.0 || rho_pos > 1.0 || rho_neg < 0.0 || rho_neg > 1.0)
    throw std::invalid_argument("corrupted_eta: flip probability outside [0,1]");
  require_admissible(rho_pos, rho_neg, "corrupted_eta");
  return (1.0 - rho_pos) * eta + rho_neg * (1.0 - eta);
}

// Inverse of the above: eta = (eta_bar - rho_neg) / (1 - rho_pos - rho_neg).
inline double invert_corrupted_eta(double eta_bar, double rho_pos, double rho_neg) {
  double denom = 1.0 - rho_pos - rho_neg;
  if (denom <= kAdmissibleMargin)
    throw std::runtime_error("invert_corrupted_eta: 1 - rho_pos - rho_neg is not positive");
  return (eta_bar - rho_neg) / denom;
}

// Threshold on eta_bar equivalent to eta > t:
//   eta > t  <=>  eta_bar > (1 - rho_pos - rho_neg) * t + rho_neg.
inline double corrupted_threshold(double t, double rho_pos, double rho_neg) {
  if (t < 0.0 || t > 1.0) throw std::invalid_argument("corrupted_threshold: t outside [0,1]");
  require_admissible(rho_pos, rho_neg, "corrupted_threshold");
  return (1.0 - rho_pos - rho_neg) * t + rho_neg;
}

// Probability that an instance with clean class-probability eta has its label
// flipped: F = rho_pos * eta + rho_neg * (1 - eta).
inline double flip_probability(double eta, double rho_pos, double rho_neg) {
  require_admissible(rho_pos, rho_neg, "flip_probability");
  return rho_pos * eta + rho_neg * (1.0 - eta);
}

using FlipFn = std::function<double(double)>;                     // score -> [0,1]
using InstanceFn = std::function<double(std::span<const double>)>;  // instance -> value

// Flip function presets usable from experiment configs.
inline FlipFn sigmoid_abs_flip(double alpha) {
  return [alpha](double z) { return 1.0 / (1.0 + std::exp(alpha * std::abs(z))); };
}
inline FlipFn constant_flip(double c) {
  return [c](double) { return c; };
}
inline FlipFn step_flip(double a) {
  return [a](double z) { return z <= 0.0 ? a : 0.0; };
}

enum class NoiseKind { iln, idn, ccn, sln, bcn, bcn_plus, ptn, byln, sin };

inline const char* noise_kind_name(NoiseKind k) {
  switch (k) {
    case NoiseKind::iln: return "iln";
    case NoiseKind::idn: return "idn";
    case NoiseKind::ccn: return "ccn";
    case NoiseKind::sln: return "sln";
    case NoiseKind::bcn: return "bcn";
    case NoiseKind::bcn_plus: return "bcn+";
    case NoiseKind::ptn: return "ptn";
    case NoiseKind::byln: return "byln";
    case NoiseKind::sin: return "sin";
  }
  return "?";
}

// A label-flipping process. Instance-level kinds carry rho functions directly;
// score-mediated kinds additionally expose the score map and the per-score
// flip functions (every kind reduces to instance- and label-dependent flips).
class NoiseModel {
 public:
  NoiseKind kind() const { return kind_; }

  double rho_pos(std::span<const double> x) const { return rho_pos_(x); }
  double rho_neg(std::span<const double> x) const { return rho_neg_(x); }

  bool score_mediated() const { return static_cast<bool>(score_); }
  double score(std::span<const double> x) const {
    if (!score_) throw std::logic_error("NoiseModel: no score map for this kind");
    return score_(x);
  }
  double flip_pos_at(double z) const { return flip_pos_(z); }
  double flip_neg_at(double z) const { return flip_neg_(z); }

  // CCN/SLN constants when applicable.
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  // --- constructors -------------------------------------------------------

  static NoiseModel iln(InstanceFn rho_pos, InstanceFn rho_neg) {
    NoiseModel m;
    m.kind_ = NoiseKind::iln;
    m.rho_pos_ = std::move(rho_pos);
    m.rho_neg_ = std::move(rho_neg);
    return m;
  }

  static NoiseModel idn(InstanceFn f) {
    NoiseModel m;
    m.kind_ = NoiseKind::idn;
    m.rho_pos_ = f;
    m.rho_neg_ = std::move(f);
    return m;
  }

  // rho_pos == alpha, rho_neg == beta.
  static NoiseModel ccn(double alpha, double beta) {
    NoiseModel m;
    m.kind_ = NoiseKind::ccn;
    m.alpha_ = alpha;
    m.beta_ = beta;
    m.rho_pos_ = [alpha](std::span<const double>) { return alpha; };
    m.rho_neg_ = [beta](std::span<const double>) { return beta; };
    m.flip_pos_ = constant_flip(alpha);
    m.flip_neg_ = constant_flip(beta);
    return m;
  }

  static NoiseModel sln(double alpha) {
    if (alpha >= 0.5)
      throw std::runtime_error("sln: symmetric flip probability must be < 1/2");
    NoiseModel m = ccn(alpha, alpha);
    m.kind_ = NoiseKind::sln;
    return m;
  }

  static NoiseModel bcn(FlipFn f_neg, FlipFn f_pos, InstanceFn score,
                        NoiseKind kind = NoiseKind::bcn) {
    NoiseModel m;
    m.kind_ = kind;
    m.score_ = std::move(score);
    m.flip_pos_ = std::move(f_pos);
    m.flip_neg_ = std::move(f_neg);
    auto s = m.score_;
    auto fp = m.flip_pos_;
    auto fn = m.flip_neg_;
    m.rho_pos_ = [s, fp](std::span<const double> x) { return fp(s(x)); };
    m.rho_neg_ = [s, fn](std::span<const double> x) { return fn(s(x)); };
    return m;
  }

  static NoiseModel bcn_plus(FlipFn f_neg, FlipFn f_pos, InstanceFn score) {
    return bcn(std::move(f_neg), std::move(f_pos), std::move(score), NoiseKind::bcn_plus);
  }

  // Noise mediated by the clean class-probability itself.
  static NoiseModel ptn(FlipFn f_neg, FlipFn f_pos, InstanceFn eta) {
    return bcn(std::move(f_neg), std::move(f_pos), std::move(eta), NoiseKind::ptn);
  }

  // Symmetric score-mediated noise, f applied to both labels.
  static NoiseModel byln(FlipFn f, InstanceFn score) {
    return bcn(f, f, std::move(score), NoiseKind::byln);
  }

  // Score is the linear one of an underlying GLM.
  static NoiseModel sin_model(FlipFn f_neg, FlipFn f_pos, Vec w_star) {
    auto score = [w = std::move(w_star)](std::span<const double> x) { return dot(w, x); };
    return bcn(std::move(f_neg), std::move(f_pos), std::move(score), NoiseKind::sin);
  }

 private:
  NoiseKind kind_ = NoiseKind::iln;
  InstanceFn rho_pos_, rho_neg_;
  InstanceFn score_;
  FlipFn flip_pos_, flip_neg_;
  double alpha_ = std::nan("");
  double beta_ = std::nan("");
};

// --- admissibility --------------------------------------------------------

struct AdmissibilityViolation {
  std::size_t index;
  double rho_pos;
  double rho_neg;
};

struct AdmissibilityReport {
  std::vector<AdmissibilityViolation> violations;
  std::size_t checked = 0;
  bool ok() const { return violations.empty(); }
};

inline AdmissibilityReport validate_admissible(const NoiseModel& model, const Matrix& instances) {
  AdmissibilityReport report;
  report.checked = instances.rows;
  for (std::size_t i = 0; i < instances.rows; ++i) {
    double rp = model.rho_pos(instances.row(i));
    double rn = model.rho_neg(instances.row(i));
    if (!admissible_pair(rp, rn)) report.violations.push_back({i, rp, rn});
  }
  return report;
}

inline AdmissibilityReport validate_admissible(const NoiseModel& model,
                                               const DiscreteDistribution& dist) {
  return validate_admissible(model, dist.instances());
}

// --- boundary-consistent admissibility ------------------------------------

// Probe-grid check of the three conditions on (f_neg, f_pos, s, eta):
//  (a) s order preserving for eta,
//  (b) both flip functions unimodal around the score where eta crosses 1/2,
//  (c) f_pos - f_neg non-increasing.
// Probes are (score, eta) pairs; flip functions are evaluated at the probe
// scores by finite differences.
struct BcnPlusReport {
  struct Violation {
    std::size_t index;  // probe index where the condition first fails
    double lhs, rhs;
  };
  std::optional<Violation> order_violation;       // (a)
  std::optional<Violation> unimodality_violation; // (b)
  std::optional<Violation> difference_violation;  // (c)
  bool ok() const {
    return !order_violation && !unimodality_violation && !difference_violation;
  }
};

inline BcnPlusReport validate_bcn_plus(const FlipFn& f_neg, const FlipFn& f_pos,
                                       std::vector<double> scores, std::vector<double> eta,
                                       double tol = 1e-12) {
  if (scores.size() != eta.size() || scores.empty())
    throw std::invalid_argument("validate_bcn_plus: probe arrays empty or mismatched");
  // sort probes by score
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  std::vector<double> z(scores.size()), u(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    z[i] = scores[order[i]];
    u[i] = eta[order[i]];
  }

  BcnPlusReport report;

  // (a): along increasing scores eta must be non-decreasing, and tied scores
  // must carry tied eta.
  for (std::size_t i = 1; i < z.size(); ++i) {
    bool tied = z[i] - z[i - 1] <= tol;
    if (u[i] < u[i - 1] - tol || (tied && std::abs(u[i] - u[i - 1]) > tol)) {
      report.order_violation = {i, u[i - 1], u[i]};
      break;
    }
  }

  // crossing index: last probe with eta <= 1/2 (generalised inverse at 1/2)
  std::ptrdiff_t crossing = -1;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u[i] <= 0.5) crossing = static_cast<std::ptrdiff_t>(i);

  // (b): non-decreasing up to the crossing, non-increasing after it
  auto unimodal_ok = [&](const FlipFn& f) -> std::optional<BcnPlusReport::Violation> {
    for (std::size_t i = 1; i < z.size(); ++i) {
      double prev = f(z[i - 1]);
      double cur = f(z[i]);
      bool left = static_cast<std::ptrdiff_t>(i) <= crossing;
      if (left && cur < prev - tol) return BcnPlusReport::Violation{i, prev, cur};
      if (!left && cur > prev + tol) return BcnPlusReport::Violation{i, prev, cur};
    }
    return std::nullopt;
  };
  report.unimodality_violation = unimodal_ok(f_neg);
  if (!report.unimodality_violation) report.unimodality_violation = unimodal_ok(f_pos);

  // (c): difference non-increasing
  for (std::size_t i = 1; i < z.size(); ++i) {
    double prev = f_pos(z[i - 1]) - f_neg(z[i - 1]);
    double cur = f_pos(z[i]) - f_neg(z[i]);
    if (cur > prev + tol) {
      report.difference_violation = {i, prev, cur};
      break;
    }
  }
  return report;
}

// Default probe grid: evenly spaced scores spanning an observed range.
inline std::vector<double> probe_grid(double lo, double hi, std::size_t n = 512) {
  if (n < 2 || !(hi > lo)) throw std::invalid_argument("probe_grid: bad range");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

// --- corruption -----------------------------------------------------------

inline LabeledSample corrupt_sample(const LabeledSample& sample, const NoiseModel& model,
                                    std::uint64_t seed) {
  Rng rng = Rng(seed).stream(0xf11b);
  LabeledSample out = sample;
  out.provenance = Provenance::corrupted;
  out.seed = seed;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    auto x = sample.x.row(i);
    double rp = model.rho_pos(x);
    double rn = model.rho_neg(x);
    if (!admissible_pair(rp, rn)) {
      std::ostringstream msg;
      msg << "corrupt_sample: inadmissible noise at instance " << i << " (rho_pos=" << rp
          << ", rho_neg=" << rn << ")";
      throw std::runtime_error(msg.str());
    }
    double rho = sample.y[i] > 0 ? rp : rn;
    if (rng.bernoulli(rho)) out.y[i] = static_cast<std::int8_t>(-sample.y[i]);
  }
  return out;
}

// Atom-wise corruption of a finite distribution: same support and marginal,
// eta replaced by eta_bar. The derived base rate
//   pi_bar = pi - E[(rho_pos + rho_neg) * eta] + E[rho_neg]
// is checked against sum(m * eta_bar) before returning.
inline DiscreteDistribution corrupt_distribution(const DiscreteDistribution& dist,
                                                 const NoiseModel& model) {
  const std::size_t k = dist.size();
  Vec rho_p(k), rho_n(k);
  for (std::size_t i = 0; i < k; ++i) {
    rho_p[i] = model.rho_pos(dist.instance(i));
    rho_n[i] = model.rho_neg(dist.instance(i));
    if (!admissible_pair(rho_p[i], rho_n[i])) {
      std::ostringstream msg;
      msg << "corrupt_distribution: inadmissible noise at atom " << i;
      throw std::runtime_error(msg.str());
    }
  }
  Vec eta_bar(k);
  double pi_from_sum = 0.0;
  double pi_translated = dist.base_rate();
  for (std::size_t i = 0; i < k; ++i) {
    eta_bar[i] = (1.0 - rho_p[i]) * dist.eta()[i] + rho_n[i] * (1.0 - dist.eta()[i]);
    pi_from_sum += dist.marginal()[i] * eta_bar[i];
    pi_translated += dist.marginal()[i] * (rho_n[i] - (rho_p[i] + rho_n[i]) * dist.eta()[i]);
  }
  if (std::abs(pi_from_sum - pi_translated) > 1e-12)
    throw std::runtime_error("corrupt_distribution: base-rate identity failed");
  Matrix inst = dist.instances();
  return DiscreteDistribution(std::move(inst), dist.marginal(), std::move(eta_bar));
}

// Corrupted link of a score-mediated model:
//   u_bar(z) = (1 - f_pos(z)) * u(z) + f_neg(z) * (1 - u(z)).
inline double corrupted_link(const LinkFn& u, const FlipFn& f_neg, const FlipFn& f_pos,
                             double z) {
  double fp = f_pos(z);
  double fn = f_neg(z);
  require_admissible(fp, fn, "corrupted_link");
  return (1.0 - fp) * u(z) + fn * (1.0 - u(z));
}

}  // namespace labelnoise
