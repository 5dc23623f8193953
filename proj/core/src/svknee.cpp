#include "skiorder/svknee.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include <Eigen/SVD>

#include "skiorder/error.hpp"

namespace skiorder {
namespace {

std::string shape_string(Eigen::Index m, Eigen::Index n) {
  return std::to_string(m) + "x" + std::to_string(n);
}

std::size_t numerical_rank(std::span<const double> sigmas, std::size_t m, std::size_t n,
                           std::optional<double> rank_tolerance) {
  if (sigmas.empty()) return 0;
  const double tol = rank_tolerance.value_or(static_cast<double>(std::max(m, n)) * sigmas[0] *
                                             std::numeric_limits<double>::epsilon());
  return static_cast<std::size_t>(
      std::count_if(sigmas.begin(), sigmas.end(), [tol](double s) { return s > tol; }));
}

}  // namespace

SingularCurve curve_from_sigmas(std::vector<double> sigmas, std::size_t m_rows,
                                std::size_t n_cols, std::optional<double> rank_tolerance) {
  if (m_rows == 0 || n_cols == 0) {
    throw Error(ErrorCode::invalid_shape, "curve_from_sigmas: zero dimension");
  }
  for (double s : sigmas) {
    if (!std::isfinite(s) || s < 0.0) {
      throw Error(ErrorCode::numerical, "curve_from_sigmas: singular values must be finite and >= 0");
    }
  }
  std::sort(sigmas.begin(), sigmas.end(), std::greater<>());

  SingularCurve curve;
  curve.m_rows = m_rows;
  curve.n_cols = n_cols;
  curve.full_length = sigmas.size();
  curve.kappa = static_cast<double>(std::min(m_rows, n_cols)) /
                static_cast<double>(std::max(m_rows, n_cols));
  curve.rank = numerical_rank(sigmas, m_rows, n_cols, rank_tolerance);
  if (curve.rank == 0) {
    throw Error(ErrorCode::degenerate_matrix, "singular curve has rank 0 (" +
                                                  shape_string(static_cast<Eigen::Index>(m_rows),
                                                               static_cast<Eigen::Index>(n_cols)) +
                                                  ")");
  }
  sigmas.resize(curve.rank);
  curve.sigmas = std::move(sigmas);
  return curve;
}

SingularCurve singular_curve(const Eigen::MatrixXd& x, std::optional<double> rank_tolerance) {
  if (x.rows() == 0 || x.cols() == 0) {
    throw Error(ErrorCode::invalid_shape, "singular_curve: empty matrix");
  }
  if (!x.allFinite()) {
    throw Error(ErrorCode::numerical,
                "singular_curve: non-finite entries in " + shape_string(x.rows(), x.cols()) + " matrix");
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(x);
  if (svd.info() != Eigen::Success) {
    throw Error(ErrorCode::numerical,
                "singular_curve: SVD failed for " + shape_string(x.rows(), x.cols()) + " matrix");
  }
  const Eigen::VectorXd& s = svd.singularValues();
  std::vector<double> sigmas(s.data(), s.data() + s.size());
  return curve_from_sigmas(std::move(sigmas), static_cast<std::size_t>(x.rows()),
                           static_cast<std::size_t>(x.cols()), rank_tolerance);
}

SingularCurve singular_curve(const PreprocessedMatrix& x, std::optional<double> rank_tolerance) {
  return singular_curve(x.values, rank_tolerance);
}

KneeTriangle KneeTriangle::from_points(const Eigen::Vector2d& p1, const Eigen::Vector2d& pk,
                                       const Eigen::Vector2d& p3) {
  return KneeTriangle{p1, pk, p3, p1 - pk, p3 - pk};
}

std::size_t triangle_knee_index(std::span<const double> sigmas) {
  const std::size_t r = sigmas.size();
  if (r < 3) {
    throw Error(ErrorCode::knee_undefined,
                "knee undefined: need at least 3 singular values, have " + std::to_string(r));
  }
  // Perpendicular distance to a fixed chord is |vertical deviation| times a
  // constant, so the vertical deviation picks the same index.
  const double first = sigmas.front();
  const double slope = (sigmas.back() - first) / static_cast<double>(r - 1);
  std::size_t best = 2;
  double best_dev = -1.0;
  for (std::size_t i = 2; i <= r - 1; ++i) {
    const double chord = first + slope * static_cast<double>(i - 1);
    const double dev = std::abs(sigmas[i - 1] - chord);
    if (dev > best_dev) {
      best_dev = dev;
      best = i;
    }
  }
  return best;
}

KneeGeometry detect_knee(const SingularCurve& curve) {
  if (curve.rank < 3 || curve.sigmas.size() < 3) {
    throw Error(ErrorCode::knee_undefined,
                "knee undefined: rank " + std::to_string(curve.rank) + " < 3");
  }
  const std::span<const double> s(curve.sigmas.data(), curve.rank);

  KneeGeometry g;
  g.rank = curve.rank;
  g.knee_index = triangle_knee_index(s);
  g.sigma_max = s.front();
  g.sigma_knee = s[g.knee_index - 1];

  const double r = static_cast<double>(g.rank);
  const double ik = static_cast<double>(g.knee_index);
  g.normalized = KneeTriangle::from_points({0.0, 1.0}, {ik / r, g.sigma_knee / g.sigma_max},
                                           {1.0, 0.0});
  g.index_sigma = KneeTriangle::from_points({1.0, s.front()}, {ik, g.sigma_knee}, {r, s.back()});
  return g;
}

}  // namespace skiorder
