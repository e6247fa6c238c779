#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "labelnoise/rng.hpp"

namespace labelnoise {

using Vec = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

// Dense row-major feature matrix.
struct Matrix {
  std::vector<double> data;
  std::size_t rows = 0;
  std::size_t cols = 0;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : data(r * c, 0.0), rows(r), cols(c) {}

  std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
  std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
};

enum class Provenance { clean, corrupted };

// Feature vectors with labels in {-1, +1}.
struct LabeledSample {
  Matrix x;
  std::vector<std::int8_t> y;
  Provenance provenance = Provenance::clean;
  std::uint64_t seed = 0;

  std::size_t size() const { return y.size(); }
  std::size_t dim() const { return x.cols; }
};

// Finite-support distribution: atoms, marginal weights m(x) and
// class-probabilities eta(x). Everything downstream of it is exact.
class DiscreteDistribution {
 public:
  DiscreteDistribution(Matrix instances, Vec marginal, Vec eta)
      : instances_(std::move(instances)), marginal_(std::move(marginal)), eta_(std::move(eta)) {
    const std::size_t k = instances_.rows;
    if (k == 0) throw std::invalid_argument("DiscreteDistribution: empty support");
    if (marginal_.size() != k || eta_.size() != k)
      throw std::invalid_argument("DiscreteDistribution: size mismatch");
    double total = 0.0;
    for (double m : marginal_) {
      if (m < 0.0) throw std::invalid_argument("DiscreteDistribution: negative marginal weight");
      total += m;
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw std::invalid_argument("DiscreteDistribution: marginal must sum to 1");
    for (double e : eta_)
      if (e < 0.0 || e > 1.0)
        throw std::invalid_argument("DiscreteDistribution: eta outside [0,1]");
    pi_ = 0.0;
    for (std::size_t i = 0; i < k; ++i) pi_ += marginal_[i] * eta_[i];
    if (!(pi_ > 0.0 && pi_ < 1.0))
      throw std::invalid_argument("DiscreteDistribution: base rate must lie strictly in (0,1)");
  }

  // Convenience: 1-d atoms given as plain values.
  static DiscreteDistribution from_scalars(const Vec& points, Vec marginal, Vec eta) {
    Matrix m(points.size(), 1);
    for (std::size_t i = 0; i < points.size(); ++i) m.data[i] = points[i];
    return DiscreteDistribution(std::move(m), std::move(marginal), std::move(eta));
  }

  std::size_t size() const { return marginal_.size(); }
  std::size_t dim() const { return instances_.cols; }
  std::span<const double> instance(std::size_t i) const { return instances_.row(i); }
  const Matrix& instances() const { return instances_; }
  const Vec& marginal() const { return marginal_; }
  const Vec& eta() const { return eta_; }
  double base_rate() const { return pi_; }

  // Class-conditional atom weights P(x) = eta*m/pi, Q(x) = (1-eta)*m/(1-pi).
  double p_cond(std::size_t i) const { return eta_[i] * marginal_[i] / pi_; }
  double q_cond(std::size_t i) const { return (1.0 - eta_[i]) * marginal_[i] / (1.0 - pi_); }

 private:
  Matrix instances_;
  Vec marginal_;
  Vec eta_;
  double pi_ = 0.0;
};

// Piecewise-building blocks for generative class-probability functions.
using LinkFn = std::function<double(double)>;

inline double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Ramp link of a margin-separable concept: 1 above +gamma, 0 below -gamma,
// linear in between.
inline double margin_link(double z, double gamma) {
  if (z > gamma) return 1.0;
  if (z < -gamma) return 0.0;
  return (z + gamma) / (2.0 * gamma);
}

// Synthetic clean distributions. Three kinds:
//  - gaussian_mixture: the 2-d two-Gaussian preset with means (1,1)/(-1,-1),
//    identity covariance and eta(x) = 1{x1+x2 > 0};
//  - glm: x ~ N(0, I_d), eta(x) = u(<w*, x>) for a monotone link u;
//  - margin: same marginal with the ramp link at margin gamma.
class GenerativeDistribution {
 public:
  enum class Kind { gaussian_mixture, glm, margin };

  static GenerativeDistribution gaussian_mixture_preset() {
    GenerativeDistribution d;
    d.kind_ = Kind::gaussian_mixture;
    d.dim_ = 2;
    return d;
  }

  static GenerativeDistribution glm(Vec w_star, LinkFn link, double weight_bound) {
    GenerativeDistribution d;
    d.kind_ = Kind::glm;
    d.dim_ = w_star.size();
    d.w_star_ = std::move(w_star);
    d.link_ = std::move(link);
    d.check_weight_bound(weight_bound);
    d.check_link_monotone();
    return d;
  }

  static GenerativeDistribution margin_separable(Vec w_star, double gamma, double weight_bound) {
    if (gamma <= 0.0) throw std::invalid_argument("margin_separable: gamma must be positive");
    GenerativeDistribution d;
    d.kind_ = Kind::margin;
    d.dim_ = w_star.size();
    d.w_star_ = std::move(w_star);
    d.gamma_ = gamma;
    d.link_ = [gamma](double z) { return margin_link(z, gamma); };
    d.check_weight_bound(weight_bound);
    return d;
  }

  Kind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  const Vec& w_star() const { return w_star_; }
  double gamma() const { return gamma_; }

  // True score s*(x) behind the class-probability function.
  double score(std::span<const double> x) const {
    if (x.size() != dim_) throw std::invalid_argument("score: dimension mismatch");
    if (kind_ == Kind::gaussian_mixture) return x[0] + x[1];
    return dot(w_star_, x);
  }

  double eta(std::span<const double> x) const {
    double z = score(x);
    if (kind_ == Kind::gaussian_mixture) return z > 0.0 ? 1.0 : 0.0;
    double e = link_(z);
    if (e < 0.0 || e > 1.0) throw std::runtime_error("GenerativeDistribution: link left [0,1]");
    return e;
  }

  Vec draw_instance(Rng& rng) const {
    Vec x(dim_);
    if (kind_ == Kind::gaussian_mixture) {
      double cx = rng.bernoulli(0.5) ? 1.0 : -1.0;
      x[0] = cx + rng.normal();
      x[1] = cx + rng.normal();
    } else {
      for (auto& v : x) v = rng.normal();
    }
    return x;
  }

 private:
  void check_weight_bound(double w_bound) const {
    if (norm2(w_star_) > w_bound + 1e-12)
      throw std::invalid_argument("GenerativeDistribution: ||w*|| exceeds declared bound");
  }
  void check_link_monotone() const {
    double prev = link_(-40.0);
    for (int i = 1; i <= 400; ++i) {
      double cur = link_(-40.0 + 0.2 * i);
      if (cur < prev - 1e-12 || cur < 0.0 || cur > 1.0)
        throw std::invalid_argument("GenerativeDistribution: link not a monotone map into [0,1]");
      prev = cur;
    }
  }

  Kind kind_ = Kind::gaussian_mixture;
  std::size_t dim_ = 0;
  Vec w_star_;
  LinkFn link_;
  double gamma_ = 0.0;
};

struct LinearScorer {
  Vec weights;
  LinkFn link;  // optional monotone post-map

  double operator()(std::span<const double> x) const {
    double z = dot(weights, x);
    return link ? link(z) : z;
  }
};

inline double eta_of(const DiscreteDistribution& dist, std::size_t atom) {
  if (atom >= dist.size()) throw std::invalid_argument("eta_of: atom out of range");
  return dist.eta()[atom];
}

inline double eta_of(const GenerativeDistribution& dist, std::span<const double> x) {
  return dist.eta(x);
}

inline LabeledSample sample_clean(const GenerativeDistribution& dist, std::size_t n,
                                  std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_clean: n must be >= 1");
  Rng rng = Rng(seed).stream(0x5a11);
  LabeledSample s;
  s.x = Matrix(n, dist.dim());
  s.y.resize(n);
  s.provenance = Provenance::clean;
  s.seed = seed;
  for (std::size_t i = 0; i < n; ++i) {
    Vec x = dist.draw_instance(rng);
    std::copy(x.begin(), x.end(), s.x.row(i).begin());
    s.y[i] = rng.bernoulli(dist.eta(x)) ? 1 : -1;
  }
  return s;
}

inline LabeledSample sample_clean(const DiscreteDistribution& dist, std::size_t n,
                                  std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_clean: n must be >= 1");
  Rng rng = Rng(seed).stream(0x5a11);
  // inverse-CDF over atoms
  Vec cdf(dist.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    acc += dist.marginal()[i];
    cdf[i] = acc;
  }
  cdf.back() = 1.0;
  LabeledSample s;
  s.x = Matrix(n, dist.dim());
  s.y.resize(n);
  s.provenance = Provenance::clean;
  s.seed = seed;
  for (std::size_t i = 0; i < n; ++i) {
    double u = rng.uniform();
    std::size_t k = std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
    if (k >= dist.size()) k = dist.size() - 1;
    auto atom = dist.instance(k);
    std::copy(atom.begin(), atom.end(), s.x.row(i).begin());
    s.y[i] = rng.bernoulli(dist.eta()[k]) ? 1 : -1;
  }
  return s;
}

}  // namespace labelnoise
