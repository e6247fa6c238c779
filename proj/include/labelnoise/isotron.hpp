#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "labelnoise/core.hpp"
#include "labelnoise/isotonic.hpp"
#include "labelnoise/rng.hpp"

namespace labelnoise {

enum class IsotronVariant { isotron, slisotron };

struct TrainConfig {
  std::size_t iterations = 100;
  IsotronVariant variant = IsotronVariant::isotron;
  std::optional<double> lipschitz;  // slisotron; default 4 / score range
  double holdout_fraction = 0.3;    // 0 returns the final iterate
  std::uint64_t seed = 0;
  bool normalize_to_unit_ball = true;
};

// Linear weights plus a learned monotone link; predictions are probabilities.
struct IsotronModel {
  Vec weights;
  IsotonicFit link;
  double feature_scale = 1.0;  // training features were divided by this
  std::vector<double> train_errors;    // per-iterate mean squared error
  std::vector<double> holdout_errors;  // empty when no holdout
  std::size_t selected_iteration = 0;

  double score(std::span<const double> x) const { return dot(weights, x) / feature_scale; }
};

inline double predict_proba(const IsotronModel& model, std::span<const double> x) {
  if (x.size() != model.weights.size())
    throw std::invalid_argument("predict_proba: dimension mismatch");
  return interpolate_link(model.link, model.score(x));
}

// sign(2 * proba - 1) with the tie at 1/2 broken towards +1.
inline int classify(const IsotronModel& model, std::span<const double> x) {
  return predict_proba(model, x) >= 0.5 ? 1 : -1;
}

namespace detail {

inline IsotonicFit fit_link(std::span<const double> sorted_scores,
                            std::span<const double> sorted_targets, const TrainConfig& cfg) {
  if (cfg.variant == IsotronVariant::isotron) return pav(sorted_scores, sorted_targets);
  double lip;
  if (cfg.lipschitz) {
    lip = *cfg.lipschitz;
  } else {
    double range = sorted_scores.back() - sorted_scores.front();
    lip = range > 0.0 ? 4.0 / range : std::numeric_limits<double>::infinity();
  }
  return lpav(sorted_scores, sorted_targets, lip);
}

}  // namespace detail

// Alternating weight update and isotonic link fit. Labels are mapped
// -1 -> 0, +1 -> 1 so the link estimates a probability; the weight update is
//   w <- w + (1/m) * sum_i (t_i - u(<w, x_i>)) * x_i.
// With a holdout, the returned model is the iterate with the smallest holdout
// squared error; otherwise the final iterate.
inline IsotronModel train(const LabeledSample& sample, const TrainConfig& cfg) {
  const std::size_t n = sample.size();
  const std::size_t d = sample.dim();
  if (n == 0) throw std::invalid_argument("train: empty sample");
  if (cfg.iterations < 1) throw std::invalid_argument("train: iterations must be >= 1");
  if (cfg.holdout_fraction < 0.0 || cfg.holdout_fraction >= 1.0)
    throw std::invalid_argument("train: holdout_fraction outside [0,1)");
  for (auto label : sample.y)
    if (label != 1 && label != -1) throw std::invalid_argument("train: labels must be in {-1,+1}");

  double scale = 1.0;
  if (cfg.normalize_to_unit_ball) {
    scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, norm2(sample.x.row(i)));
    if (scale == 0.0) scale = 1.0;
  }

  // split
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::size_t n_hold = static_cast<std::size_t>(cfg.holdout_fraction * static_cast<double>(n));
  if (n_hold >= n) n_hold = n - 1;
  if (n_hold > 0) {
    Rng rng = Rng(cfg.seed).stream(0x901d);
    for (std::size_t i = n - 1; i > 0; --i)
      std::swap(order[i], order[rng.below(i + 1)]);
  }
  const std::size_t n_fit = n - n_hold;

  // scaled copies; fit part first
  Matrix xs(n, d);
  std::vector<double> targets(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto src = sample.x.row(order[i]);
    auto dst = xs.row(i);
    for (std::size_t j = 0; j < d; ++j) dst[j] = src[j] / scale;
    targets[i] = sample.y[order[i]] > 0 ? 1.0 : 0.0;
  }

  IsotronModel best;
  best.feature_scale = scale;
  double best_holdout = std::numeric_limits<double>::infinity();

  Vec w(d, 0.0);
  std::vector<double> scores(n_fit);
  std::vector<std::size_t> rank(n_fit);
  std::vector<double> sorted_scores(n_fit), sorted_targets(n_fit), fitted(n_fit);

  IsotronModel out;
  out.feature_scale = scale;

  auto consider = [&](const Vec& weights, const IsotonicFit& link, double train_err) {
    out.train_errors.push_back(train_err);
    double hold_err = 0.0;
    if (n_hold > 0) {
      for (std::size_t i = n_fit; i < n; ++i) {
        double p = interpolate_link(link, dot(weights, xs.row(i)));
        double diff = p - targets[i];
        hold_err += diff * diff;
      }
      hold_err /= static_cast<double>(n_hold);
      out.holdout_errors.push_back(hold_err);
    }
    if (n_hold == 0 || hold_err < best_holdout) {
      best_holdout = hold_err;
      best.weights = weights;
      best.link = link;
      best.selected_iteration = out.train_errors.size() - 1;
    }
  };

  for (std::size_t iter = 0; iter <= cfg.iterations; ++iter) {
    for (std::size_t i = 0; i < n_fit; ++i) scores[i] = dot(w, xs.row(i));
    std::iota(rank.begin(), rank.end(), 0);
    std::stable_sort(rank.begin(), rank.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    for (std::size_t i = 0; i < n_fit; ++i) {
      sorted_scores[i] = scores[rank[i]];
      sorted_targets[i] = targets[rank[i]];
    }
    IsotonicFit link = detail::fit_link(sorted_scores, sorted_targets, cfg);
    double train_err = 0.0;
    for (std::size_t i = 0; i < n_fit; ++i) {
      fitted[rank[i]] = interpolate_link(link, sorted_scores[i]);
      double diff = fitted[rank[i]] - sorted_targets[i];
      train_err += diff * diff;
    }
    train_err /= static_cast<double>(n_fit);
    consider(w, link, train_err);
    if (iter == cfg.iterations) break;
    // gradient-style update toward the residual direction
    double inv_m = 1.0 / static_cast<double>(n_fit);
    for (std::size_t i = 0; i < n_fit; ++i) {
      double r = (targets[i] - fitted[i]) * inv_m;
      auto row = xs.row(i);
      for (std::size_t j = 0; j < d; ++j) w[j] += r * row[j];
    }
  }

  best.train_errors = std::move(out.train_errors);
  best.holdout_errors = std::move(out.holdout_errors);
  return best;
}

}  // namespace labelnoise
