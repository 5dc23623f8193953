#pragma once

// Reference computations used only by the tests. They deliberately avoid the
// library's code paths (no triangle_knee_index, no BDCSVD).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "skiorder/random.hpp"

namespace skiorder::oracle {

// Knee by explicit perpendicular distance from each point to the line through
// the first and last points (1-based index, interior only, first max wins).
inline std::size_t perpendicular_knee(std::span<const double> s) {
  const double x0 = 1.0, y0 = s.front();
  const double x1 = static_cast<double>(s.size()), y1 = s.back();
  const double dx = x1 - x0, dy = y1 - y0;
  const double len = std::hypot(dx, dy);
  std::size_t best = 0;
  double best_d = -1.0;
  for (std::size_t i = 2; i <= s.size() - 1; ++i) {
    const double px = static_cast<double>(i), py = s[i - 1];
    const double d = std::abs(dy * px - dx * py + x1 * y0 - y1 * x0) / len;
    if (d > best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

// Largest singular value from the eigenvalues of the smaller Gram matrix.
inline double spectral_norm(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  const Eigen::MatrixXd gram =
      a.rows() <= a.cols() ? Eigen::MatrixXd(a * a.transpose()) : Eigen::MatrixXd(a.transpose() * a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

// Best rank-r approximation via a two-sided Jacobi SVD.
inline Eigen::MatrixXd truncated(const Eigen::MatrixXd& a, Eigen::Index r) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::Index k = std::min(r, svd.singularValues().size());
  return svd.matrixU().leftCols(k) * svd.singularValues().head(k).asDiagonal() *
         svd.matrixV().leftCols(k).transpose();
}

inline Eigen::MatrixXd gaussian_matrix(Eigen::Index m, Eigen::Index n, std::uint64_t seed,
                                       double scale = 1.0) {
  Rng rng(seed);
  Eigen::MatrixXd a(m, n);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = scale * rng.normal();
  return a;
}

}  // namespace skiorder::oracle
