#include "skiorder/swarmsim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "skiorder/error.hpp"
#include "skiorder/random.hpp"

namespace skiorder {
namespace {

using Vec = Eigen::Vector2d;

constexpr std::uint64_t kMeasurementStream = 0x6d65617375726521ULL;

void record(Eigen::MatrixXd& out, std::span<const Vec> x, std::size_t t) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    out(static_cast<Eigen::Index>(2 * i), static_cast<Eigen::Index>(t)) = x[i].x();
    out(static_cast<Eigen::Index>(2 * i + 1), static_cast<Eigen::Index>(t)) = x[i].y();
  }
}

void check_finite(std::span<const Vec> x, std::span<const Vec> v, std::size_t step) {
  const auto bad = [](const Vec& p) { return !p.allFinite(); };
  if (std::any_of(x.begin(), x.end(), bad) || std::any_of(v.begin(), v.end(), bad)) {
    throw Error(ErrorCode::diverged, "simulation diverged at step " + std::to_string(step));
  }
}

Vec normal2(Rng& rng) {
  const double a = rng.normal();
  const double b = rng.normal();
  return {a, b};
}

double wrap(double a, double box) {
  double w = std::fmod(a, box);
  if (w < 0.0) w += box;
  return w;
}

double min_image(double d, double box) { return d - box * std::round(d / box); }

}  // namespace

const char* to_string(Model model) noexcept {
  switch (model) {
    case Model::pure_noise: return "pure_noise";
    case Model::position_walk: return "position_walk";
    case Model::velocity_walk: return "velocity_walk";
    case Model::kinematic_noise: return "kinematic_noise";
    case Model::acceleration_noise: return "acceleration_noise";
    case Model::cucker_smale: return "cucker_smale";
    case Model::vicsek: return "vicsek";
    case Model::spiral_in: return "spiral_in";
  }
  return "unknown";
}

std::optional<Model> model_from_string(std::string_view name) noexcept {
  for (Model m : kAllModels) {
    if (name == to_string(m)) return m;
  }
  return std::nullopt;
}

void validate(const SimConfig& cfg) {
  const auto fail = [](const std::string& msg) { throw Error(ErrorCode::config, msg); };
  if (cfg.n_agents < 1) fail("n_agents must be >= 1");
  if (cfg.n_steps < 2) fail("n_steps must be >= 2");
  if (!(cfg.dt > 0.0)) fail("dt must be > 0");
  if (!(cfg.mu >= 0.0 && cfg.mu <= 1.0)) fail("mu must lie in [0, 1]");
  if (!(cfg.radius >= 0.0)) fail("radius must be >= 0");
  if (!(cfg.speed >= 0.0)) fail("speed must be >= 0");
  if (!(cfg.box_size > 0.0)) fail("box_size must be > 0");
  if (!(cfg.init_extent >= 0.0)) fail("init_extent must be >= 0");
  if (!(cfg.spiral_t_max > 0.0)) fail("spiral_t_max must be > 0");
  if (!(cfg.noise_fraction >= 0.0)) fail("noise_fraction must be >= 0");
  if (!std::isfinite(cfg.K) || !std::isfinite(cfg.beta) || !std::isfinite(cfg.freq_f)) {
    fail("K, beta and freq_f must be finite");
  }
}

double cucker_smale_weight(double squared_distance, double K, double beta) {
  return K / std::pow(1.0 + squared_distance, beta);
}

std::vector<double> vicsek_headings(std::span<const Vec> positions,
                                    std::span<const double> headings, double radius,
                                    double box_size) {
  const std::size_t n = positions.size();
  const double r2 = radius * radius;
  std::vector<double> next(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double dx = min_image(positions[j].x() - positions[i].x(), box_size);
      const double dy = min_image(positions[j].y() - positions[i].y(), box_size);
      if (dx * dx + dy * dy <= r2) {
        sx += std::cos(headings[j]);
        sy += std::sin(headings[j]);
      }
    }
    next[i] = std::atan2(sy, sx);
  }
  return next;
}

Vec spiral_point(double t, double freq_f, double n1, double n2, double n3) {
  const double decay = std::exp(-t);
  const double phase = 2.0 * std::numbers::pi * (freq_f + n1) * t;
  return {decay * std::sin(phase + n2) + 5.0 * t, decay * std::cos(phase + n3) + 2.0 * t};
}

SignalMatrix simulate(const SimConfig& cfg) {
  validate(cfg);
  const std::size_t na = cfg.n_agents;
  const std::size_t steps = cfg.n_steps;
  const double dt = cfg.dt;
  Rng rng(cfg.seed);

  std::vector<Vec> x(na);
  std::vector<Vec> v(na);
  for (auto& p : x) {
    const double a = rng.uniform(0.0, cfg.init_extent);
    const double b = rng.uniform(0.0, cfg.init_extent);
    p = {a, b};
  }
  for (auto& p : v) p = normal2(rng);

  SignalMatrix out;
  out.n_agents = na;
  out.n_steps = steps;
  out.values.resize(static_cast<Eigen::Index>(2 * na), static_cast<Eigen::Index>(steps));
  out.row_labels.reserve(2 * na);
  for (std::size_t i = 0; i < na; ++i) {
    out.row_labels.push_back({i, 0});
    out.row_labels.push_back({i, 1});
  }

  switch (cfg.model) {
    case Model::pure_noise:
      for (std::size_t t = 0; t < steps; ++t) {
        for (auto& p : x) p = normal2(rng);
        record(out.values, x, t);
      }
      break;

    case Model::position_walk:
      for (std::size_t t = 0; t < steps; ++t) {
        record(out.values, x, t);
        for (auto& p : x) p += normal2(rng);
        check_finite(x, v, t);
      }
      break;

    case Model::velocity_walk:
      for (std::size_t t = 0; t < steps; ++t) {
        record(out.values, x, t);
        for (std::size_t i = 0; i < na; ++i) {
          x[i] += v[i] * dt;
          v[i] += normal2(rng);
        }
        check_finite(x, v, t);
      }
      break;

    case Model::kinematic_noise:
      for (std::size_t t = 0; t < steps; ++t) {
        record(out.values, x, t);
        for (auto& p : x) {
          const Vec n = normal2(rng);
          p += cfg.mu * p.cwiseAbs().cwiseProduct(n);
        }
        check_finite(x, v, t);
      }
      break;

    case Model::acceleration_noise:
      for (std::size_t t = 0; t < steps; ++t) {
        record(out.values, x, t);
        for (std::size_t i = 0; i < na; ++i) {
          const Vec n = normal2(rng);
          x[i] += v[i] * dt;
          v[i] += cfg.mu * v[i].cwiseAbs().cwiseProduct(n);
        }
        check_finite(x, v, t);
      }
      break;

    case Model::cucker_smale: {
      // Alignment term scaled by dt / n_agents so the explicit update is a
      // convex combination of velocities whenever K * dt <= 1.
      const double gain = dt / static_cast<double>(na);
      std::vector<Vec> dv(na);
      for (std::size_t t = 0; t < steps; ++t) {
        record(out.values, x, t);
        for (std::size_t i = 0; i < na; ++i) {
          Vec acc = Vec::Zero();
          for (std::size_t j = 0; j < na; ++j) {
            if (j == i) continue;
            const double w = cucker_smale_weight((x[i] - x[j]).squaredNorm(), cfg.K, cfg.beta);
            acc += w * (v[j] - v[i]);
          }
          dv[i] = gain * acc;
        }
        for (std::size_t i = 0; i < na; ++i) {
          x[i] += v[i] * dt;
          v[i] += dv[i];
        }
        check_finite(x, v, t);
      }
      break;
    }

    case Model::vicsek: {
      std::vector<double> heading(na);
      for (auto& h : heading) h = rng.uniform(0.0, 2.0 * std::numbers::pi);
      std::vector<Vec> wrapped(na);
      for (std::size_t t = 0; t < steps; ++t) {
        // Recorded positions are unwrapped; the box only shapes neighbourhoods.
        record(out.values, x, t);
        for (std::size_t i = 0; i < na; ++i) {
          wrapped[i] = {wrap(x[i].x(), cfg.box_size), wrap(x[i].y(), cfg.box_size)};
        }
        heading = vicsek_headings(wrapped, heading, cfg.radius, cfg.box_size);
        for (std::size_t i = 0; i < na; ++i) {
          x[i] += cfg.speed * dt * Vec{std::cos(heading[i]), std::sin(heading[i])};
        }
        check_finite(x, v, t);
      }
      break;
    }

    case Model::spiral_in: {
      std::vector<std::array<double, 3>> draws(na);
      for (auto& d : draws) d = {rng.normal(), rng.normal(), rng.normal()};
      for (std::size_t t = 0; t < steps; ++t) {
        const double time = cfg.spiral_t_max * static_cast<double>(t) /
                            static_cast<double>(steps - 1);
        for (std::size_t i = 0; i < na; ++i) {
          x[i] = spiral_point(time, cfg.freq_f, draws[i][0], draws[i][1], draws[i][2]);
        }
        record(out.values, x, t);
      }
      break;
    }
  }

  if (cfg.measurement_noise) {
    return add_measurement_noise(out, cfg.noise_fraction, derive_seed(cfg.seed, kMeasurementStream, 0));
  }
  return out;
}

SignalMatrix add_measurement_noise(const SignalMatrix& x, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0)) {
    throw Error(ErrorCode::config, "add_measurement_noise: fraction must be >= 0");
  }
  SignalMatrix out = x;
  if (fraction == 0.0) return out;
  Rng rng(seed);
  for (Eigen::Index i = 0; i < out.values.rows(); ++i) {
    const double range = x.values.row(i).maxCoeff() - x.values.row(i).minCoeff();
    const double sd = fraction * range;
    for (Eigen::Index t = 0; t < out.values.cols(); ++t) {
      out.values(i, t) += sd * rng.normal();
    }
  }
  return out;
}

}  // namespace skiorder
