#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "skiorder/svknee.hpp"
#include "skiorder/trajmat.hpp"

namespace skiorder {

/// Marcenko-Pastur support edges for the singular values of a scaled noise
/// matrix with aspect ratio kappa: (1 - sqrt(kappa), 1 + sqrt(kappa)).
struct NoiseBounds {
  double lower = 0.0;
  double upper = 2.0;
  double kappa = 1.0;

  /// Open interval: a value sitting exactly on an edge counts as outside.
  bool contains(double sigma) const { return sigma > lower && sigma < upper; }
};

/// kappa = min(m, n) / max(m, n). Throws invalid_shape on a zero dimension.
NoiseBounds noise_bounds(std::size_t m_rows, std::size_t n_cols);

/// Large-n limit of the top singular value of (spike + noise) / sqrt(n) for a
/// spike of strength x: sqrt((x + 1/x)(x + kappa/x)) above the detection
/// threshold x > kappa^(1/4), and the bulk edge 1 + sqrt(kappa) below it.
double asymptotic_spiked_sv(double x, double kappa);

double normalized_sv_at_knee(const SingularCurve& curve, const KneeGeometry& knee);
double fraction_outside_bounds(const SingularCurve& curve, const NoiseBounds& bounds);
bool knee_outside_bounds(const SingularCurve& curve, const KneeGeometry& knee,
                         const NoiseBounds& bounds);
double normalized_knee_position(const KneeGeometry& knee);

/// Trapezoidal area under y = sigma_i / sigma_1 against x = i / r for
/// i = i_k .. r.
double area_after_knee(const SingularCurve& curve, const KneeGeometry& knee);

/// Angle between v1 and v2 in degrees, from atan2(|v1 x v2|, <v1, v2>), so the
/// result spans [0, 180]. Throws geometry on a zero-length vector.
double knee_angle(const KneeTriangle& tri);

/// c = sin(theta) / |v2 - v1|. Note this is half the Menger curvature of the
/// triangle (P1, Pk, P3), kept in this form.
double knee_curvature(const KneeTriangle& tri);

/// |v2| / |v1|.
double knee_vector_ratio(const KneeTriangle& tri);

/// Which triangle the knee angle is measured in. Curvature and vector ratio
/// always use the normalized triangle.
enum class AnglePlane {
  index_sigma,  // raw (i, sigma_i) coordinates
  normalized,   // (i / r, sigma_i / sigma_1) with P1 = (0, 1), P3 = (1, 0)
};

const char* to_string(AnglePlane plane) noexcept;
std::optional<AnglePlane> angle_plane_from_string(std::string_view name) noexcept;

struct MetricsOptions {
  AnglePlane angle_plane = AnglePlane::index_sigma;
  std::optional<double> rank_tolerance;
};

struct MetricsReport {
  bool knee_defined = false;

  // Knee-dependent metrics; meaningful only when knee_defined.
  double normalized_sv_at_knee = 0.0;
  bool knee_outside_bounds = false;
  double normalized_knee_position = 0.0;
  double area_after_knee = 0.0;
  double knee_angle_deg = 0.0;
  double curvature = 0.0;
  double knee_vector_ratio = 0.0;
  std::optional<KneeGeometry> knee;

  // Curve-only fields, always populated.
  double fraction_outside_bounds = 0.0;
  NoiseBounds bounds;
  std::size_t rank = 0;
  AnglePlane angle_plane = AnglePlane::index_sigma;
};

/// Runs the full chain on a curve. A rank below 3 produces a report with
/// knee_defined == false rather than an exception.
MetricsReport compute_all(const SingularCurve& curve, const MetricsOptions& options = {});

/// singular_curve followed by the curve overload.
MetricsReport compute_all(const PreprocessedMatrix& x, const MetricsOptions& options = {});

}  // namespace skiorder
