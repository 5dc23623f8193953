#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "skiorder/trajmat.hpp"

namespace skiorder {

using CellState = std::uint8_t;

/// Rule table of a 1D, `states`-state automaton with a `neighbors`-cell window.
/// Index i encodes a window in base `states`, leftmost cell most significant.
struct CARuleSet {
  int states = 4;
  int neighbors = 5;
  bool isotropic = true;
  std::vector<CellState> rule;          // next state per window, rule[0] == 0
  std::vector<std::uint8_t> rule_is_used;
  std::vector<std::uint32_t> lambda_path;  // one representative per non-dead class
  std::size_t lambda_ct = 0;
  std::size_t rules_used = 0;
  std::uint64_t rule_seed = 0;

  std::size_t rule_count() const { return rule.size(); }
};

/// Index of the window whose digit string is the reverse of `index`'s.
/// Throws invalid_shape when index >= states^neighbors.
std::size_t isotropic_mate(std::size_t index, int states, int neighbors);

/// Seeded rule table generation. Every non-dead entry gets a uniform live
/// state (mirrored onto its mate when isotropic), the class representatives
/// are collected in index order and shuffled, and lambda = 0.33 is applied.
CARuleSet new_rule_set(std::uint64_t rule_seed, int states = 4, int neighbors = 5,
                       bool isotropic = true);

/// Enables the first round(lambda * lambda_ct) entries of lambda_path (and
/// their mates) and disables the rest. lambda outside [0, 1] is clamped with a
/// warning on std::clog. Returns rules_used.
std::size_t set_rules_used(CARuleSet& rules, double lambda);

/// One synchronous update with circular boundaries: a cell's next state is
/// rule[code] when rule_is_used[code], otherwise dead.
std::vector<CellState> step(std::span<const CellState> world, const CARuleSet& rules);

struct CAConfig {
  double lambda = 0.33;
  std::size_t n_cells = 230;
  std::size_t n_steps = 443;
  int states = 4;
  int neighbors = 5;
  bool isotropic = true;
  double dead_probability = 0.5;
  std::uint64_t world_seed = 0;
  std::uint64_t rule_seed = 0;
};

/// Cell states over time, n_cells rows x n_steps columns (column 0 is the
/// initial world).
struct CATrace {
  Eigen::Matrix<CellState, Eigen::Dynamic, Eigen::Dynamic> grid;
  CARuleSet rules;

  SignalMatrix to_signal_matrix() const;
};

CATrace run(const CAConfig& cfg);

/// The 23-value lambda sweep, dense around the edge of chaos.
const std::vector<double>& default_lambda_grid();

}  // namespace skiorder
