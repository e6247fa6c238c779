#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "labelnoise/core.hpp"

namespace labelnoise {

namespace detail {

inline Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
eigen_view(const Matrix& m) {
  return {m.data.data(), static_cast<Eigen::Index>(m.rows), static_cast<Eigen::Index>(m.cols)};
}

}  // namespace detail

// Ridge regression through the normal equations: (X'X + lambda I) w = X'y.
// lambda = 0 on a singular Gram matrix is reported as an error.
inline Vec ridge_fit(const Matrix& x, std::span<const std::int8_t> y, double lambda) {
  if (x.rows == 0 || x.rows != y.size()) throw std::invalid_argument("ridge_fit: bad shapes");
  if (lambda < 0.0) throw std::invalid_argument("ridge_fit: lambda must be >= 0");
  auto xm = detail::eigen_view(x);
  Eigen::VectorXd yv(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) yv[static_cast<Eigen::Index>(i)] = y[i];
  Eigen::MatrixXd gram = xm.transpose() * xm;
  gram.diagonal().array() += lambda;
  Eigen::VectorXd rhs = xm.transpose() * yv;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (lambda == 0.0) {
    auto d = ldlt.vectorD();
    if (!(d.minCoeff() > d.maxCoeff() * 1e-12) || !(d.maxCoeff() > 0.0))
      throw std::runtime_error("ridge_fit: singular system; use lambda > 0");
  }
  Eigen::VectorXd w = ldlt.solve(rhs);
  double residual = (gram * w - rhs).norm();
  if (!(residual <= 1e-8 * (1.0 + rhs.norm())) || !w.allFinite())
    throw std::runtime_error("ridge_fit: normal equations solve failed");
  return Vec(w.data(), w.data() + w.size());
}

struct MarginFilterResult {
  Matrix x;
  std::vector<std::int8_t> y;
  Vec hyperplane;                 // unit-norm least-squares direction
  std::vector<std::size_t> kept;  // indices into the input
};

// Least-squares hyperplane (minimum-norm solution, so rank-deficient feature
// matrices are fine), normalized to unit length, then every instance with
// y * <w, x> < gamma is dropped. The survivors are separable with margin
// gamma by construction, which is re-checked before returning.
inline MarginFilterResult margin_filter(const Matrix& x, std::span<const std::int8_t> y,
                                        double gamma) {
  if (x.rows == 0 || x.rows != y.size()) throw std::invalid_argument("margin_filter: bad shapes");
  bool has_pos = false, has_neg = false;
  for (auto label : y) (label > 0 ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg)
    throw std::invalid_argument("margin_filter: both classes must be present");

  auto xm = detail::eigen_view(x);
  Eigen::VectorXd yv(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) yv[static_cast<Eigen::Index>(i)] = y[i];
  Eigen::VectorXd w = xm.completeOrthogonalDecomposition().solve(yv);
  double norm = w.norm();
  if (!(norm > 0.0)) throw std::runtime_error("margin_filter: degenerate least-squares solution");
  w /= norm;

  MarginFilterResult out;
  out.hyperplane = Vec(w.data(), w.data() + w.size());
  for (std::size_t i = 0; i < x.rows; ++i) {
    double margin = static_cast<double>(y[i]) * dot(out.hyperplane, x.row(i));
    if (margin >= gamma) out.kept.push_back(i);
  }
  if (out.kept.empty())
    throw std::runtime_error("margin_filter: every instance violates the margin");
  out.x = Matrix(out.kept.size(), x.cols);
  out.y.resize(out.kept.size());
  for (std::size_t i = 0; i < out.kept.size(); ++i) {
    auto src = x.row(out.kept[i]);
    std::copy(src.begin(), src.end(), out.x.row(i).begin());
    out.y[i] = y[out.kept[i]];
  }
  for (std::size_t i = 0; i < out.x.rows; ++i)
    if (static_cast<double>(out.y[i]) * dot(out.hyperplane, out.x.row(i)) < gamma)
      throw std::runtime_error("margin_filter: post-condition failed");
  return out;
}

}  // namespace labelnoise
