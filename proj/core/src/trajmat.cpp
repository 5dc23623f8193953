#include "skiorder/trajmat.hpp"

#include <cmath>
#include <string>

#include "skiorder/error.hpp"

namespace skiorder {

SignalMatrix SignalMatrix::from_rows(Eigen::MatrixXd values) {
  SignalMatrix out;
  out.n_agents = static_cast<std::size_t>(values.rows());
  out.n_steps = static_cast<std::size_t>(values.cols());
  out.row_labels.resize(out.n_agents);
  for (std::size_t i = 0; i < out.n_agents; ++i) out.row_labels[i] = RowLabel{i, -1};
  out.values = std::move(values);
  return out;
}

SignalMatrix assemble_trajectory(std::span<const Track> agents) {
  if (agents.empty() || agents.front().empty() || agents.front().front().empty()) {
    throw Error(ErrorCode::empty_input, "assemble_trajectory: no agents, samples or dimensions");
  }
  const std::size_t n_steps = agents.front().size();
  const std::size_t dims = agents.front().front().size();
  if (n_steps < 2) {
    throw Error(ErrorCode::empty_input, "assemble_trajectory: need at least 2 samples per agent");
  }

  SignalMatrix out;
  out.n_agents = agents.size();
  out.n_steps = n_steps;
  out.values.resize(static_cast<Eigen::Index>(dims * agents.size()),
                    static_cast<Eigen::Index>(n_steps));
  out.row_labels.reserve(dims * agents.size());

  for (std::size_t a = 0; a < agents.size(); ++a) {
    const Track& track = agents[a];
    if (track.size() != n_steps) {
      throw Error(ErrorCode::length_mismatch,
                  "assemble_trajectory: agent " + std::to_string(a) + " has " +
                      std::to_string(track.size()) + " samples, expected " +
                      std::to_string(n_steps));
    }
    for (std::size_t t = 0; t < n_steps; ++t) {
      if (track[t].size() != dims) {
        throw Error(ErrorCode::length_mismatch,
                    "assemble_trajectory: agent " + std::to_string(a) + " sample " +
                        std::to_string(t) + " has dimension " +
                        std::to_string(track[t].size()) + ", expected " + std::to_string(dims));
      }
      for (std::size_t c = 0; c < dims; ++c) {
        out.values(static_cast<Eigen::Index>(a * dims + c), static_cast<Eigen::Index>(t)) =
            track[t][c];
      }
    }
    for (std::size_t c = 0; c < dims; ++c) {
      out.row_labels.push_back(RowLabel{a, static_cast<int>(c)});
    }
  }
  return out;
}

PreprocessedMatrix preprocess(const SignalMatrix& x, double variance_floor) {
  return preprocess(x.values, variance_floor);
}

PreprocessedMatrix preprocess(const Eigen::MatrixXd& x, double variance_floor) {
  const Eigen::Index m = x.rows();
  const Eigen::Index n = x.cols();
  if (m < 1 || n < 2) {
    throw Error(ErrorCode::invalid_shape, "preprocess: need at least 1 row and 2 columns, got " +
                                              std::to_string(m) + "x" + std::to_string(n));
  }
  if (!(variance_floor >= 0.0)) {
    throw Error(ErrorCode::config, "preprocess: variance_floor must be >= 0");
  }

  PreprocessedMatrix out;
  out.row_means.resize(static_cast<std::size_t>(m));
  out.row_stds.resize(static_cast<std::size_t>(m));

  std::vector<Eigen::VectorXd> kept;
  for (Eigen::Index i = 0; i < m; ++i) {
    double mean = x.row(i).mean();
    Eigen::VectorXd centred = x.row(i).transpose().array() - mean;
    // Second pass removes the rounding left in the first mean; a constant row
    // then centres to exact zeros.
    const double residual = centred.mean();
    centred.array() -= residual;
    mean += residual;
    const double ss = centred.squaredNorm();
    const double std_pop = std::sqrt(ss / static_cast<double>(n));
    out.row_means[static_cast<std::size_t>(i)] = mean;
    out.row_stds[static_cast<std::size_t>(i)] = std_pop;

    if (!std::isfinite(std_pop)) {
      throw Error(ErrorCode::numerical, "preprocess: row " + std::to_string(i) + " is not finite");
    }
    if (std_pop <= variance_floor) {
      out.dropped_rows.push_back(static_cast<std::size_t>(i));
      continue;
    }
    // sqrt(N) * s_i == sqrt(sum of squares): divide by the norm directly.
    centred /= std::sqrt(ss);
    kept.push_back(std::move(centred));
    out.kept_rows.push_back(static_cast<std::size_t>(i));
  }

  if (kept.empty()) {
    throw Error(ErrorCode::degenerate_matrix,
                "preprocess: all " + std::to_string(m) + " rows have variance below the floor");
  }
  out.values.resize(static_cast<Eigen::Index>(kept.size()), n);
  for (std::size_t r = 0; r < kept.size(); ++r) {
    out.values.row(static_cast<Eigen::Index>(r)) = kept[r].transpose();
  }
  return out;
}

}  // namespace skiorder
