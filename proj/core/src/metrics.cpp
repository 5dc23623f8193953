#include "skiorder/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "skiorder/error.hpp"

namespace skiorder {

NoiseBounds noise_bounds(std::size_t m_rows, std::size_t n_cols) {
  if (m_rows == 0 || n_cols == 0) {
    throw Error(ErrorCode::invalid_shape, "noise_bounds: zero dimension (" +
                                              std::to_string(m_rows) + "x" +
                                              std::to_string(n_cols) + ")");
  }
  NoiseBounds b;
  b.kappa = static_cast<double>(std::min(m_rows, n_cols)) /
            static_cast<double>(std::max(m_rows, n_cols));
  const double root = std::sqrt(b.kappa);
  b.lower = 1.0 - root;
  b.upper = 1.0 + root;
  return b;
}

double asymptotic_spiked_sv(double x, double kappa) {
  if (x > std::pow(kappa, 0.25)) {
    return std::sqrt((x + 1.0 / x) * (x + kappa / x));
  }
  return 1.0 + std::sqrt(kappa);
}

double normalized_sv_at_knee(const SingularCurve&, const KneeGeometry& knee) {
  return knee.sigma_knee / knee.sigma_max;
}

double fraction_outside_bounds(const SingularCurve& curve, const NoiseBounds& bounds) {
  const auto outside = std::count_if(curve.sigmas.begin(), curve.sigmas.begin() + curve.rank,
                                     [&](double s) { return !bounds.contains(s); });
  return static_cast<double>(outside) / static_cast<double>(curve.rank);
}

bool knee_outside_bounds(const SingularCurve&, const KneeGeometry& knee,
                         const NoiseBounds& bounds) {
  return !bounds.contains(knee.sigma_knee);
}

double normalized_knee_position(const KneeGeometry& knee) {
  return static_cast<double>(knee.knee_index) / static_cast<double>(knee.rank);
}

double area_after_knee(const SingularCurve& curve, const KneeGeometry& knee) {
  const double r = static_cast<double>(knee.rank);
  const double top = curve.sigmas.front();
  double area = 0.0;
  for (std::size_t i = knee.knee_index; i < knee.rank; ++i) {
    const double y0 = curve.sigmas[i - 1] / top;
    const double y1 = curve.sigmas[i] / top;
    area += 0.5 * (y0 + y1) / r;
  }
  return area;
}

double knee_angle(const KneeTriangle& tri) {
  if (tri.v1.norm() == 0.0 || tri.v2.norm() == 0.0) {
    throw Error(ErrorCode::geometry, "knee_angle: zero-length knee vector");
  }
  const double cross = tri.v1.x() * tri.v2.y() - tri.v1.y() * tri.v2.x();
  const double dot = tri.v1.dot(tri.v2);
  return std::atan2(std::abs(cross), dot) * 180.0 / std::numbers::pi;
}

double knee_curvature(const KneeTriangle& tri) {
  const double chord = (tri.v2 - tri.v1).norm();
  if (chord == 0.0) {
    throw Error(ErrorCode::geometry, "knee_curvature: P1 and P3 coincide");
  }
  const double theta = knee_angle(tri) * std::numbers::pi / 180.0;
  // sin(180 deg) evaluates to ~1e-16 in floating point; clamp the sign noise.
  return std::max(0.0, std::sin(theta)) / chord;
}

double knee_vector_ratio(const KneeTriangle& tri) {
  const double n1 = tri.v1.norm();
  if (n1 == 0.0) {
    throw Error(ErrorCode::geometry, "knee_vector_ratio: pre-knee vector has zero length");
  }
  return tri.v2.norm() / n1;
}

const char* to_string(AnglePlane plane) noexcept {
  switch (plane) {
    case AnglePlane::index_sigma: return "index_sigma";
    case AnglePlane::normalized: return "normalized";
  }
  return "unknown";
}

std::optional<AnglePlane> angle_plane_from_string(std::string_view name) noexcept {
  if (name == "index_sigma") return AnglePlane::index_sigma;
  if (name == "normalized") return AnglePlane::normalized;
  return std::nullopt;
}

MetricsReport compute_all(const SingularCurve& curve, const MetricsOptions& options) {
  MetricsReport report;
  report.bounds = noise_bounds(curve.m_rows, curve.n_cols);
  report.rank = curve.rank;
  report.angle_plane = options.angle_plane;
  report.fraction_outside_bounds = fraction_outside_bounds(curve, report.bounds);

  if (curve.rank < 3) return report;

  const KneeGeometry knee = detect_knee(curve);
  report.knee_defined = true;
  report.normalized_sv_at_knee = normalized_sv_at_knee(curve, knee);
  report.knee_outside_bounds = knee_outside_bounds(curve, knee, report.bounds);
  report.normalized_knee_position = normalized_knee_position(knee);
  report.area_after_knee = area_after_knee(curve, knee);
  report.knee_angle_deg = knee_angle(options.angle_plane == AnglePlane::index_sigma
                                         ? knee.index_sigma
                                         : knee.normalized);
  report.curvature = knee_curvature(knee.normalized);
  report.knee_vector_ratio = knee_vector_ratio(knee.normalized);
  report.knee = knee;
  return report;
}

MetricsReport compute_all(const PreprocessedMatrix& x, const MetricsOptions& options) {
  return compute_all(singular_curve(x, options.rank_tolerance), options);
}

}  // namespace skiorder
