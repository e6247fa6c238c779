#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace labelnoise {

// A fitted monotone link: strictly increasing knot scores with non-decreasing
// values in [0,1]. Ties in the input scores are pooled into one knot.
struct IsotonicFit {
  std::vector<double> scores;
  std::vector<double> values;
  std::optional<double> lipschitz_bound;

  std::size_t size() const { return scores.size(); }
};

namespace detail {

struct Pooled {
  std::vector<double> scores;   // unique, ascending
  std::vector<double> targets;  // weighted means of tied targets
  std::vector<double> weights;
};

inline Pooled pool_ties(std::span<const double> scores, std::span<const double> targets) {
  if (scores.size() != targets.size())
    throw std::invalid_argument("isotonic: scores/targets length mismatch");
  if (scores.empty()) throw std::invalid_argument("isotonic: empty input");
  for (std::size_t i = 1; i < scores.size(); ++i)
    if (scores[i] < scores[i - 1])
      throw std::invalid_argument("isotonic: scores must be sorted non-decreasing");
  Pooled p;
  std::size_t i = 0;
  while (i < scores.size()) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < scores.size() && scores[j] == scores[i]) sum += targets[j++];
    p.scores.push_back(scores[i]);
    p.targets.push_back(sum / static_cast<double>(j - i));
    p.weights.push_back(static_cast<double>(j - i));
    i = j;
  }
  return p;
}

// Weighted pool-adjacent-violators sweep over pre-pooled points.
inline std::vector<double> pav_pooled(const Pooled& p) {
  const std::size_t k = p.scores.size();
  std::vector<double> value(k), weight(k);
  std::vector<std::size_t> start(k);
  std::size_t top = 0;
  for (std::size_t i = 0; i < k; ++i) {
    value[top] = p.targets[i];
    weight[top] = p.weights[i];
    start[top] = i;
    ++top;
    while (top >= 2 && value[top - 1] < value[top - 2]) {
      double w = weight[top - 2] + weight[top - 1];
      value[top - 2] = (weight[top - 2] * value[top - 2] + weight[top - 1] * value[top - 1]) / w;
      weight[top - 2] = w;
      --top;
    }
  }
  std::vector<double> fitted(k);
  for (std::size_t b = 0; b < top; ++b) {
    std::size_t end = (b + 1 < top) ? start[b + 1] : k;
    for (std::size_t i = start[b]; i < end; ++i) fitted[i] = value[b];
  }
  return fitted;
}

inline void clamp_unit(std::vector<double>& v) {
  for (double& x : v) x = std::clamp(x, 0.0, 1.0);
}

}  // namespace detail

// Least-squares isotonic regression: the unique minimizer of
// sum (targets_i - u_i)^2 over non-decreasing u. Each pooled block's value is
// the mean of its targets.
inline IsotonicFit pav(std::span<const double> scores, std::span<const double> targets) {
  auto pooled = detail::pool_ties(scores, targets);
  IsotonicFit fit;
  fit.scores = pooled.scores;
  fit.values = detail::pav_pooled(pooled);
  detail::clamp_unit(fit.values);
  return fit;
}

namespace detail {

// Derivative of a strictly convex piecewise-quadratic function: non-decreasing
// piecewise-linear, kept as knot/value pairs with explicit tail slopes.
struct PwlDerivative {
  std::vector<double> x;  // ascending breakpoints
  std::vector<double> d;  // derivative values at the breakpoints
  double slope_left = 0.0;
  double slope_right = 0.0;

  // leftmost root; slopes are positive in the tails, so one always exists
  double root() const {
    if (d.front() > 0.0) return x.front() - d.front() / slope_left;
    if (d.back() < 0.0) return x.back() - d.back() / slope_right;
    std::size_t lo = 0, hi = x.size() - 1;  // d[lo] <= 0, d[hi] >= 0
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      if (d[mid] < 0.0) lo = mid;
      else hi = mid;
    }
    if (d[lo] == 0.0) return x[lo];
    if (x[hi] == x[lo]) return x[hi];
    return x[lo] - d[lo] * (x[hi] - x[lo]) / (d[hi] - d[lo]);
  }

  // min-convolution with the window [u - cap, u]: splice a flat zero segment
  // of width cap at the minimizer, shifting everything to its right
  void splice_flat(double at, double cap) {
    std::vector<double> nx, nd;
    nx.reserve(x.size() + 2);
    nd.reserve(x.size() + 2);
    std::size_t i = 0;
    for (; i < x.size() && x[i] < at; ++i) {
      nx.push_back(x[i]);
      nd.push_back(std::min(d[i], 0.0));
    }
    nx.push_back(at);
    nd.push_back(0.0);
    if (cap > 0.0) {
      nx.push_back(at + cap);
      nd.push_back(0.0);
    }
    for (; i < x.size(); ++i) {
      if (x[i] <= at) continue;  // swallowed by the flat segment
      nx.push_back(x[i] + cap);
      nd.push_back(std::max(d[i], 0.0));
    }
    x = std::move(nx);
    d = std::move(nd);
  }

  void add_quadratic(double weight, double center) {
    for (std::size_t i = 0; i < x.size(); ++i) d[i] += weight * (x[i] - center);
    slope_left += weight;
    slope_right += weight;
  }
};

}  // namespace detail

// Isotonic regression with the slope of consecutive fitted values bounded by
// L: 0 <= u_{i+1} - u_i <= L * (s_{i+1} - s_i). Solved exactly by forward
// dynamic programming over the convex value functions
//   g_{i+1}(u) = w_{i+1} (u - y_{i+1})^2 + min_{v in [u - c_i, u]} g_i(v),
// whose derivatives stay piecewise linear, followed by a backward clamp pass.
inline IsotonicFit lpav(std::span<const double> scores, std::span<const double> targets,
                        double lipschitz) {
  if (!(lipschitz >= 0.0)) throw std::invalid_argument("lpav: Lipschitz constant must be >= 0");
  if (std::isinf(lipschitz)) {
    IsotonicFit fit = pav(scores, targets);
    fit.lipschitz_bound = lipschitz;
    return fit;
  }
  auto pooled = detail::pool_ties(scores, targets);
  const std::size_t k = pooled.scores.size();
  IsotonicFit fit;
  fit.scores = pooled.scores;
  fit.lipschitz_bound = lipschitz;

  if (k == 1) {
    fit.values = {std::clamp(pooled.targets[0], 0.0, 1.0)};
    return fit;
  }
  if (lipschitz == 0.0) {
    double wsum = 0.0, tsum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      wsum += pooled.weights[i];
      tsum += pooled.weights[i] * pooled.targets[i];
    }
    fit.values.assign(k, std::clamp(tsum / wsum, 0.0, 1.0));
    return fit;
  }

  detail::PwlDerivative deriv;
  deriv.x = {pooled.targets[0]};
  deriv.d = {0.0};
  deriv.slope_left = deriv.slope_right = pooled.weights[0];

  std::vector<double> caps(k - 1), minima(k - 1);
  for (std::size_t i = 0; i + 1 < k; ++i) {
    caps[i] = lipschitz * (pooled.scores[i + 1] - pooled.scores[i]);
    minima[i] = deriv.root();
    deriv.splice_flat(minima[i], caps[i]);
    deriv.add_quadratic(pooled.weights[i + 1], pooled.targets[i + 1]);
  }

  std::vector<double> u(k);
  u[k - 1] = deriv.root();
  for (std::size_t i = k - 1; i-- > 0;)
    u[i] = std::clamp(minima[i], u[i + 1] - caps[i], u[i + 1]);
  detail::clamp_unit(u);
  fit.values = std::move(u);
  return fit;
}

// Piecewise-linear evaluation of a fitted link; constant extrapolation keeps
// the output inside [0,1].
inline double interpolate_link(const IsotonicFit& fit, double z) {
  if (fit.scores.empty()) throw std::invalid_argument("interpolate_link: empty fit");
  if (z <= fit.scores.front()) return fit.values.front();
  if (z >= fit.scores.back()) return fit.values.back();
  std::size_t hi = std::upper_bound(fit.scores.begin(), fit.scores.end(), z) - fit.scores.begin();
  std::size_t lo = hi - 1;
  if (fit.scores[lo] == z) return fit.values[lo];
  double t = (z - fit.scores[lo]) / (fit.scores[hi] - fit.scores[lo]);
  return fit.values[lo] + t * (fit.values[hi] - fit.values[lo]);
}

}  // namespace labelnoise
