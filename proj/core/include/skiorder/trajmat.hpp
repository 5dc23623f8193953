#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace skiorder {

// Identifies where a matrix row came from. For trajectories `dimension` is the
// coordinate (0 = x, 1 = y, ...); for cellular-automaton traces and generic
// signals it is -1 and `source` is the cell/signal index.
struct RowLabel {
  std::size_t source = 0;
  int dimension = -1;

  friend bool operator==(const RowLabel&, const RowLabel&) = default;
};

/// Raw m x N signal matrix: one row per signal, one column per timestep.
struct SignalMatrix {
  Eigen::MatrixXd values;
  std::vector<RowLabel> row_labels;
  std::size_t n_agents = 0;
  std::size_t n_steps = 0;

  std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(values.cols()); }

  /// Wraps a plain matrix (CA grids, CSV input). Each row is its own source.
  static SignalMatrix from_rows(Eigen::MatrixXd values);
};

/// One agent's samples over time; each sample is a d-dimensional point.
using Track = std::vector<std::vector<double>>;

/// Lays agent tracks out agent-major: row d*i + c holds coordinate c of agent i.
/// Throws empty_input for no agents/samples/dimensions and length_mismatch when
/// tracks or points disagree in length. Requires at least two samples.
SignalMatrix assemble_trajectory(std::span<const Track> agents);

struct PreprocessedMatrix {
  Eigen::MatrixXd values;              // m' x N, rows centred and unit-norm
  std::vector<std::size_t> kept_rows;  // indices into the source matrix
  std::vector<std::size_t> dropped_rows;
  std::vector<double> row_means;  // per source row
  std::vector<double> row_stds;   // population std per source row

  std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(values.cols()); }
};

inline constexpr double kDefaultVarianceFloor = 1e-12;

/// Removes each row's mean and divides by sqrt(N) times the population standard
/// deviation, which makes every retained row unit-norm. Rows whose standard
/// deviation is <= variance_floor are dropped and reported. Throws
/// degenerate_matrix if nothing survives.
PreprocessedMatrix preprocess(const SignalMatrix& x,
                              double variance_floor = kDefaultVarianceFloor);
PreprocessedMatrix preprocess(const Eigen::MatrixXd& x,
                              double variance_floor = kDefaultVarianceFloor);

}  // namespace skiorder
