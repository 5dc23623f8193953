#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "skiorder/trajmat.hpp"

namespace skiorder {

enum class Model {
  pure_noise,
  position_walk,
  velocity_walk,
  kinematic_noise,
  acceleration_noise,
  cucker_smale,
  vicsek,
  spiral_in,
};

inline constexpr std::array<Model, 8> kAllModels = {
    Model::pure_noise,         Model::position_walk, Model::velocity_walk,
    Model::kinematic_noise,    Model::acceleration_noise, Model::cucker_smale,
    Model::vicsek,             Model::spiral_in,
};

const char* to_string(Model model) noexcept;
std::optional<Model> model_from_string(std::string_view name) noexcept;

// Field names double as the CLI/JSON config keys.
struct SimConfig {
  Model model = Model::pure_noise;
  std::size_t n_agents = 50;
  std::size_t n_steps = 500;
  double dt = 1.0;
  std::uint64_t seed = 0;
  double mu = 0.3;  // kinematic / acceleration noise gain
  double K = 1.0;   // Cucker-Smale coupling
  double beta = 0.4;
  double radius = 1.0;  // Vicsek interaction radius
  double speed = 0.5;
  double box_size = 10.0;  // Vicsek periodic box side
  double freq_f = 1.0;     // spiral base frequency
  double init_extent = 10.0;  // initial positions ~ U[0, init_extent]^2
  double spiral_t_max = 5.0;
  bool measurement_noise = false;
  double noise_fraction = 0.05;
};

/// Throws config on out-of-range fields.
void validate(const SimConfig& cfg);

/// Returns the 2*n_agents x n_steps position matrix (agent-major rows).
///
/// Random draws happen in a fixed order so realizations are reproducible:
/// initial positions (agent, component), initial velocities (agent,
/// component), then per model either one normal per (step, agent, component)
/// or, for spiral_in, (n1, n2, n3) per agent. Measurement noise uses an
/// independent stream derived from the seed. Throws diverged naming the step
/// if the state stops being finite.
SignalMatrix simulate(const SimConfig& cfg);

/// Adds N(0, (fraction * (max_t x_i - min_t x_i))^2) to every sample of row i.
/// One draw per entry in row-major order regardless of the row's range.
SignalMatrix add_measurement_noise(const SignalMatrix& x, double fraction, std::uint64_t seed);

/// Cucker-Smale weight K / (1 + d^2)^beta for squared distance d^2.
double cucker_smale_weight(double squared_distance, double K, double beta);

/// One Vicsek heading update: each agent takes the heading of the mean unit
/// vector over every agent (itself included) within `radius`, using
/// minimum-image distances in a periodic box of side `box_size`.
std::vector<double> vicsek_headings(std::span<const Eigen::Vector2d> positions,
                                    std::span<const double> headings, double radius,
                                    double box_size);

/// Closed-form spiral-in position at time t for per-agent draws (n1, n2, n3).
Eigen::Vector2d spiral_point(double t, double freq_f, double n1, double n2, double n3);

}  // namespace skiorder
