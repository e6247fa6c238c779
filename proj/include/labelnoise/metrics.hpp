#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "labelnoise/core.hpp"
#include "labelnoise/noise.hpp"

namespace labelnoise {

enum class LossKind { zero_one, square, ramp, unhinged, logistic, custom };

// A margin loss given by its partial losses. When the partials sum to a
// constant C for every score, symmetric_sum records it (verified on a grid at
// construction).
struct Loss {
  LossKind kind = LossKind::custom;
  std::function<double(double)> pos;  // loss of predicting v when y = +1
  std::function<double(double)> neg;  // loss of predicting v when y = -1
  std::optional<double> symmetric_sum;
  std::string name = "custom";

  double operator()(int y, double v) const { return y > 0 ? pos(v) : neg(v); }
};

inline Loss make_loss(LossKind kind, std::function<double(double)> pos,
                      std::function<double(double)> neg, std::optional<double> symmetric_sum,
                      std::string name) {
  Loss l{kind, std::move(pos), std::move(neg), symmetric_sum, std::move(name)};
  if (l.symmetric_sum) {
    for (int i = 0; i < 1000; ++i) {
      double v = -10.0 + 20.0 * static_cast<double>(i) / 999.0;
      if (std::abs(l.pos(v) + l.neg(v) - *l.symmetric_sum) > 1e-10)
        throw std::invalid_argument("Loss: declared symmetric sum does not hold");
    }
  }
  return l;
}

namespace losses {

// sign(0) counts as +1, matching classify.
inline Loss zero_one() {
  return make_loss(
      LossKind::zero_one, [](double v) { return v < 0.0 ? 1.0 : 0.0; },
      [](double v) { return v >= 0.0 ? 1.0 : 0.0; }, 1.0, "zero-one");
}

// Variant that charges 1/2 to both classes exactly at the boundary.
inline Loss zero_one_half_at_boundary() {
  return make_loss(
      LossKind::zero_one,
      [](double v) { return v < 0.0 ? 1.0 : (v == 0.0 ? 0.5 : 0.0); },
      [](double v) { return v > 0.0 ? 1.0 : (v == 0.0 ? 0.5 : 0.0); }, 1.0, "zero-one-half");
}

// Square loss on probability-valued predictions in [0,1].
inline Loss square() {
  return make_loss(
      LossKind::square, [](double v) { return (1.0 - v) * (1.0 - v); },
      [](double v) { return v * v; }, std::nullopt, "square");
}

inline Loss ramp() {
  auto clip = [](double t) { return std::clamp(t, 0.0, 1.0); };
  return make_loss(
      LossKind::ramp, [clip](double v) { return clip(0.5 * (1.0 - v)); },
      [clip](double v) { return clip(0.5 * (1.0 + v)); }, 1.0, "ramp");
}

inline Loss unhinged() {
  return make_loss(
      LossKind::unhinged, [](double v) { return 1.0 - v; }, [](double v) { return 1.0 + v; },
      2.0, "unhinged");
}

inline Loss logistic() {
  return make_loss(
      LossKind::logistic, [](double v) { return std::log1p(std::exp(-v)); },
      [](double v) { return std::log1p(std::exp(v)); }, std::nullopt, "logistic");
}

}  // namespace losses

// Exact risk on a finite support, scores given per atom:
//   sum m(x) * [eta(x) l_pos(s(x)) + (1 - eta(x)) l_neg(s(x))].
inline double risk(std::span<const double> atom_scores, const DiscreteDistribution& dist,
                   const Loss& loss) {
  if (atom_scores.size() != dist.size()) throw std::invalid_argument("risk: score count mismatch");
  double r = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    double eta = dist.eta()[i];
    r += dist.marginal()[i] *
         (eta * loss.pos(atom_scores[i]) + (1.0 - eta) * loss.neg(atom_scores[i]));
  }
  return r;
}

inline double weighted_risk(std::span<const double> atom_scores, const DiscreteDistribution& dist,
                            const Loss& loss, std::span<const double> atom_weights) {
  if (atom_scores.size() != dist.size() || atom_weights.size() != dist.size())
    throw std::invalid_argument("weighted_risk: size mismatch");
  double r = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    double eta = dist.eta()[i];
    r += dist.marginal()[i] * atom_weights[i] *
         (eta * loss.pos(atom_scores[i]) + (1.0 - eta) * loss.neg(atom_scores[i]));
  }
  return r;
}

// Exact Bayes risk for the built-in losses with a closed-form pointwise
// minimizer.
inline double bayes_risk(const DiscreteDistribution& dist, const Loss& loss) {
  double r = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    double eta = dist.eta()[i];
    double best;
    switch (loss.kind) {
      case LossKind::zero_one:
        best = std::min(eta, 1.0 - eta);
        break;
      case LossKind::square:
        best = eta * (1.0 - eta);
        break;
      default:
        throw std::invalid_argument("bayes_risk: no closed form for this loss");
    }
    r += dist.marginal()[i] * best;
  }
  return r;
}

// Excess risk over the Bayes-optimal scorer. Zero-one uses the pointwise form
// |2 eta - 1| on atoms where the thresholded score disagrees with the Bayes
// label (ties at score zero follow sign(0) = +1); square assumes
// probability-valued scores and reduces to E[(s - eta)^2].
inline double regret(std::span<const double> atom_scores, const DiscreteDistribution& dist,
                     const Loss& loss) {
  if (atom_scores.size() != dist.size())
    throw std::invalid_argument("regret: score count mismatch");
  double r = 0.0;
  switch (loss.kind) {
    case LossKind::zero_one:
      for (std::size_t i = 0; i < dist.size(); ++i) {
        double eta = dist.eta()[i];
        double s = atom_scores[i];
        bool wrong = (2.0 * eta - 1.0) * s < 0.0 || (s == 0.0 && eta < 0.5);
        if (wrong) r += dist.marginal()[i] * std::abs(2.0 * eta - 1.0);
      }
      return r;
    case LossKind::square:
      for (std::size_t i = 0; i < dist.size(); ++i) {
        double diff = atom_scores[i] - dist.eta()[i];
        r += dist.marginal()[i] * diff * diff;
      }
      return r;
    default:
      throw std::invalid_argument("regret: supply a Bayes risk for this loss");
  }
}

inline double regret(std::span<const double> atom_scores, const DiscreteDistribution& dist,
                     const Loss& loss, double bayes) {
  return risk(atom_scores, dist, loss) - bayes;
}

// Excess pairwise ranking risk (one minus AUC form), exact on the support:
//   (1 / (2 pi (1-pi))) E[|eta - eta'| (1{d_eta * d_s < 0} + 1/2 * 1{d_s = 0})].
inline double ranking_regret(std::span<const double> atom_scores,
                             const DiscreteDistribution& dist) {
  if (atom_scores.size() != dist.size())
    throw std::invalid_argument("ranking_regret: score count mismatch");
  double pi = dist.base_rate();
  double acc = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    for (std::size_t j = 0; j < dist.size(); ++j) {
      double d_eta = dist.eta()[i] - dist.eta()[j];
      double d_s = atom_scores[i] - atom_scores[j];
      double credit = 0.0;
      if (d_eta * d_s < 0.0) credit = 1.0;
      else if (d_s == 0.0) credit = 0.5;
      if (credit > 0.0)
        acc += dist.marginal()[i] * dist.marginal()[j] * std::abs(d_eta) * credit;
    }
  }
  return acc / (2.0 * pi * (1.0 - pi));
}

struct MetricsRecord {
  double accuracy = 0.0;
  double auc = 0.0;
  double mse = 0.0;
};

// Accuracy / AUC / mean squared error of scores against labels. AUC uses the
// rank-sum form with average ranks for ties; MSE compares against the 0/1
// target.
inline MetricsRecord empirical_metrics(std::span<const double> scores,
                                       std::span<const std::int8_t> labels, double threshold) {
  const std::size_t n = scores.size();
  if (n == 0 || labels.size() != n)
    throw std::invalid_argument("empirical_metrics: empty or mismatched input");
  MetricsRecord rec;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < n; ++i) {
    int pred = scores[i] >= threshold ? 1 : -1;
    if (pred == labels[i]) rec.accuracy += 1.0;
    double target = labels[i] > 0 ? 1.0 : 0.0;
    rec.mse += (scores[i] - target) * (scores[i] - target);
    if (labels[i] > 0) ++n_pos;
  }
  rec.accuracy /= static_cast<double>(n);
  rec.mse /= static_cast<double>(n);
  if (n_pos == 0 || n_pos == n)
    throw std::runtime_error("empirical_metrics: AUC undefined on a single-class sample");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
    for (std::size_t t = i; t < j; ++t)
      if (labels[order[t]] > 0) rank_sum_pos += avg_rank;
    i = j;
  }
  double np = static_cast<double>(n_pos);
  double nn = static_cast<double>(n - n_pos);
  rec.auc = (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
  return rec;
}

// Noise-corrected partial losses: taking expectations of these under the
// corrupted distribution reproduces the clean risk. With w = 1/(1 - rp - rn),
//   l~_pos = w ((1 - rn) l_pos - rp l_neg)
//   l~_neg = w (-rn l_pos + (1 - rp) l_neg).
struct GeneralizedLoss {
  Loss base;

  double pos(double v, double rho_pos, double rho_neg) const {
    require_admissible(rho_pos, rho_neg, "GeneralizedLoss");
    double w = 1.0 / (1.0 - rho_pos - rho_neg);
    return w * ((1.0 - rho_neg) * base.pos(v) - rho_pos * base.neg(v));
  }
  double neg(double v, double rho_pos, double rho_neg) const {
    require_admissible(rho_pos, rho_neg, "GeneralizedLoss");
    double w = 1.0 / (1.0 - rho_pos - rho_neg);
    return w * (-rho_neg * base.pos(v) + (1.0 - rho_pos) * base.neg(v));
  }
};

inline GeneralizedLoss noise_corrected_loss(Loss base) { return GeneralizedLoss{std::move(base)}; }

// Expectation of a generalized loss under the corrupted distribution,
// evaluated exactly on a finite support with per-atom flip probabilities.
inline double corrupted_expectation(const GeneralizedLoss& gl,
                                    std::span<const double> atom_scores,
                                    const DiscreteDistribution& clean,
                                    std::span<const double> rho_pos,
                                    std::span<const double> rho_neg) {
  if (atom_scores.size() != clean.size() || rho_pos.size() != clean.size() ||
      rho_neg.size() != clean.size())
    throw std::invalid_argument("corrupted_expectation: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    double eta_bar = corrupted_eta(clean.eta()[i], rho_pos[i], rho_neg[i]);
    acc += clean.marginal()[i] *
           (eta_bar * gl.pos(atom_scores[i], rho_pos[i], rho_neg[i]) +
            (1.0 - eta_bar) * gl.neg(atom_scores[i], rho_pos[i], rho_neg[i]));
  }
  return acc;
}

}  // namespace labelnoise
