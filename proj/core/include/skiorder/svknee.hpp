#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "skiorder/trajmat.hpp"

namespace skiorder {

/// Descending singular values of an analysed matrix, truncated to the
/// numerical rank.
struct SingularCurve {
  std::vector<double> sigmas;  // sigma_1 >= ... >= sigma_rank
  std::size_t full_length = 0;  // min(m, n)
  std::size_t rank = 0;
  std::size_t m_rows = 0;
  std::size_t n_cols = 0;
  double kappa = 0.0;  // min(m, n) / max(m, n)

  double sigma_max() const { return sigmas.front(); }
};

/// Singular values of X~, sorted descending. The numerical rank counts
/// sigma_i > tol with tol = max(m, n) * sigma_1 * eps unless overridden.
/// Throws degenerate_matrix for a zero matrix, numerical on non-finite input.
SingularCurve singular_curve(const PreprocessedMatrix& x,
                             std::optional<double> rank_tolerance = std::nullopt);
SingularCurve singular_curve(const Eigen::MatrixXd& x,
                             std::optional<double> rank_tolerance = std::nullopt);

/// Builds a curve from already-known singular values (sorted here), with the
/// matrix shape supplied by the caller. Used for worked examples and replay.
SingularCurve curve_from_sigmas(std::vector<double> sigmas, std::size_t m_rows,
                                std::size_t n_cols,
                                std::optional<double> rank_tolerance = std::nullopt);

/// P1, Pk, P3 and the knee-anchored vectors v1 = P1 - Pk, v2 = P3 - Pk.
struct KneeTriangle {
  Eigen::Vector2d p1;
  Eigen::Vector2d pk;
  Eigen::Vector2d p3;
  Eigen::Vector2d v1;
  Eigen::Vector2d v2;

  static KneeTriangle from_points(const Eigen::Vector2d& p1, const Eigen::Vector2d& pk,
                                  const Eigen::Vector2d& p3);
};

struct KneeGeometry {
  std::size_t knee_index = 0;  // 1-based i_k, in [2, rank - 1]
  std::size_t rank = 0;
  double sigma_knee = 0.0;
  double sigma_max = 0.0;
  // Normalized plane: P1 = (0, 1), Pk = (i_k / r, sigma_k / sigma_1), P3 = (1, 0).
  KneeTriangle normalized;
  // Raw curve plane: P1 = (1, sigma_1), Pk = (i_k, sigma_k), P3 = (r, sigma_r).
  KneeTriangle index_sigma;
};

/// Triangle-method knee on a descending sequence: the interior index (1-based,
/// 2..n-1) with the largest |sigma_i - chord(i)|, chord through the first and
/// last points. Ties go to the smallest index. Requires at least 3 values.
std::size_t triangle_knee_index(std::span<const double> sigmas);

/// Throws knee_undefined when the curve rank is below 3.
KneeGeometry detect_knee(const SingularCurve& curve);

}  // namespace skiorder
