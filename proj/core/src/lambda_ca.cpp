#include "skiorder/lambda_ca.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <string>
#include <utility>

#include "skiorder/error.hpp"
#include "skiorder/random.hpp"

namespace skiorder {
namespace {

std::size_t checked_rule_count(int states, int neighbors) {
  if (states < 2 || states > 256) {
    throw Error(ErrorCode::config, "states must lie in [2, 256], got " + std::to_string(states));
  }
  if (neighbors < 1 || neighbors % 2 == 0) {
    throw Error(ErrorCode::config, "neighbors must be odd and >= 1, got " + std::to_string(neighbors));
  }
  std::size_t count = 1;
  for (int i = 0; i < neighbors; ++i) {
    count *= static_cast<std::size_t>(states);
    if (count > (std::size_t{1} << 26)) {
      throw Error(ErrorCode::config, "rule table too large for states^neighbors");
    }
  }
  return count;
}

std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

std::size_t isotropic_mate(std::size_t index, int states, int neighbors) {
  const std::size_t count = checked_rule_count(states, neighbors);
  if (index >= count) {
    throw Error(ErrorCode::invalid_shape, "isotropic_mate: index " + std::to_string(index) +
                                              " out of range " + std::to_string(count));
  }
  const auto base = static_cast<std::size_t>(states);
  std::size_t mate = 0;
  for (int d = 0; d < neighbors; ++d) {
    mate = mate * base + index % base;
    index /= base;
  }
  return mate;
}

CARuleSet new_rule_set(std::uint64_t rule_seed, int states, int neighbors, bool isotropic) {
  const std::size_t count = checked_rule_count(states, neighbors);
  Rng rng(rule_seed);

  CARuleSet rs;
  rs.states = states;
  rs.neighbors = neighbors;
  rs.isotropic = isotropic;
  rs.rule_seed = rule_seed;
  rs.rule.assign(count, 0);
  rs.rule_is_used.assign(count, 0);

  std::vector<std::size_t> mate(count);
  for (std::size_t i = 0; i < count; ++i) {
    mate[i] = isotropic ? isotropic_mate(i, states, neighbors) : i;
  }

  for (std::size_t i = 1; i < count; ++i) {
    rs.rule[i] = static_cast<CellState>(rng.uniform_int(1, states - 1));
    if (isotropic) rs.rule[mate[i]] = rs.rule[i];
  }

  rs.lambda_ct = isotropic ? (count + ipow(static_cast<std::size_t>(states), (neighbors + 1) / 2)) / 2 - 1
                           : count - 1;

  rs.lambda_path.reserve(rs.lambda_ct);
  for (std::size_t i = 1; i < count; ++i) {
    if (!rs.rule_is_used[i]) {
      rs.lambda_path.push_back(static_cast<std::uint32_t>(i));
      rs.rule_is_used[i] = 1;
      rs.rule_is_used[mate[i]] = 1;
    }
  }
  const auto path_len = static_cast<std::int64_t>(rs.lambda_path.size());
  for (std::int64_t i = 0; i < path_len; ++i) {
    const auto r = rng.uniform_int(0, path_len - 1);
    std::swap(rs.lambda_path[static_cast<std::size_t>(i)], rs.lambda_path[static_cast<std::size_t>(r)]);
  }

  set_rules_used(rs, 0.33);
  return rs;
}

std::size_t set_rules_used(CARuleSet& rules, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    std::clog << "warning: lambda " << lambda << " outside [0, 1], clamping\n";
    lambda = std::isnan(lambda) ? 0.0 : std::clamp(lambda, 0.0, 1.0);
  }
  const std::size_t path_len = rules.lambda_path.size();
  const double target = std::round(lambda * static_cast<double>(rules.lambda_ct));
  std::size_t used = target <= 0.0 ? 0 : static_cast<std::size_t>(target);
  used = std::min(used, path_len);

  for (std::size_t i = 0; i < path_len; ++i) {
    const std::uint8_t flag = i < used ? 1 : 0;
    const std::size_t r = rules.lambda_path[i];
    rules.rule_is_used[r] = flag;
    if (rules.isotropic) rules.rule_is_used[isotropic_mate(r, rules.states, rules.neighbors)] = flag;
  }
  rules.rules_used = used;
  return used;
}

std::vector<CellState> step(std::span<const CellState> world, const CARuleSet& rules) {
  const std::size_t n = world.size();
  const auto width = static_cast<std::size_t>(rules.neighbors);
  if (n < width) {
    throw Error(ErrorCode::invalid_shape, "step: world of " + std::to_string(n) +
                                              " cells is narrower than the neighbourhood");
  }
  const std::size_t half = width / 2;
  const auto base = static_cast<std::size_t>(rules.states);
  std::vector<CellState> next(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t code = 0;
    for (std::size_t j = 0; j < width; ++j) {
      const std::size_t cell = (c + n - half + j) % n;
      code = code * base + world[cell];
    }
    next[c] = (code != 0 && rules.rule_is_used[code]) ? rules.rule[code] : CellState{0};
  }
  return next;
}

SignalMatrix CATrace::to_signal_matrix() const {
  return SignalMatrix::from_rows(grid.cast<double>());
}

CATrace run(const CAConfig& cfg) {
  if (cfg.n_cells < static_cast<std::size_t>(std::max(cfg.neighbors, 1))) {
    throw Error(ErrorCode::config, "n_cells must be >= neighbors");
  }
  if (cfg.n_steps < 1) throw Error(ErrorCode::config, "n_steps must be >= 1");
  if (!(cfg.dead_probability >= 0.0 && cfg.dead_probability <= 1.0)) {
    throw Error(ErrorCode::config, "dead_probability must lie in [0, 1]");
  }

  CATrace trace;
  trace.rules = new_rule_set(cfg.rule_seed, cfg.states, cfg.neighbors, cfg.isotropic);
  set_rules_used(trace.rules, cfg.lambda);

  Rng rng(cfg.world_seed);
  std::vector<CellState> world(cfg.n_cells);
  for (auto& cell : world) {
    // The live state is drawn only for live cells.
    cell = rng.uniform() < cfg.dead_probability
               ? CellState{0}
               : static_cast<CellState>(rng.uniform_int(1, cfg.states - 1));
  }

  trace.grid.resize(static_cast<Eigen::Index>(cfg.n_cells), static_cast<Eigen::Index>(cfg.n_steps));
  for (std::size_t t = 0; t < cfg.n_steps; ++t) {
    for (std::size_t c = 0; c < cfg.n_cells; ++c) {
      trace.grid(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(t)) = world[c];
    }
    if (t + 1 < cfg.n_steps) world = step(world, trace.rules);
  }
  return trace;
}

const std::vector<double>& default_lambda_grid() {
  static const std::vector<double> grid = {0.0,  0.05, 0.1,  0.15, 0.2,  0.25, 0.3,  0.35,
                                           0.37, 0.39, 0.4,  0.45, 0.5,  0.55, 0.6,  0.65,
                                           0.7,  0.75, 0.8,  0.85, 0.9,  0.95, 0.99};
  return grid;
}

}  // namespace skiorder
