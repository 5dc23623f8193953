#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skiorder/lambda_ca.hpp"
#include "skiorder/metrics.hpp"
#include "skiorder/swarmsim.hpp"

namespace skiorder {

struct ModelVariant {
  Model model = Model::pure_noise;
  bool measurement_noise = false;

  /// e.g. "vicsek" or "vicsek+noise".
  std::string label() const;
  static std::optional<ModelVariant> parse(std::string_view label);

  friend bool operator==(const ModelVariant&, const ModelVariant&) = default;
};

/// The eleven motion classes ordered from most disordered to most ordered.
std::vector<ModelVariant> default_models();

struct EnsembleSpec {
  std::vector<ModelVariant> models = default_models();
  std::size_t trials_per_model = 25;
  std::uint64_t base_seed = 0;
  SimConfig sim_defaults;  // model, seed and measurement_noise are overridden per trial
  MetricsOptions metrics;
  double variance_floor = kDefaultVarianceFloor;
};

struct EnsembleRow {
  std::string label;
  std::size_t model_index = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::optional<MetricsReport> report;  // empty when the trial failed
  std::string error;
};

/// Runs every (model, trial) pair; trial t of model m is seeded with
/// derive_seed(base_seed, m, t). Failures are captured per row. `threads` = 0
/// uses the hardware concurrency; results do not depend on it. Rows are
/// ordered model-major.
std::vector<EnsembleRow> run_ensemble(const EnsembleSpec& spec, unsigned threads = 1);

struct CASweepSpec {
  std::vector<double> lambdas = default_lambda_grid();
  std::size_t seeds_per_lambda = 5;
  std::uint64_t base_seed = 0;
  CAConfig ca_defaults;  // lambda and both seeds are overridden per run
  MetricsOptions metrics;
  double variance_floor = kDefaultVarianceFloor;
};

struct CASweepRow {
  double lambda = 0.0;
  std::size_t lambda_index = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::optional<MetricsReport> report;
  std::string error;
};

/// Lambda sweep of the cellular automaton; run t at lambda index l uses
/// derive_seed(base_seed, l, t) for the world and its successor for the rules.
std::vector<CASweepRow> run_ca_sweep(const CASweepSpec& spec, unsigned threads = 1);

struct StatSummary {
  double mean = 0.0;
  double median = 0.0;
  double std_sample = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr = 0.0;
  std::size_t n = 0;
};

/// Type-7 quantile (linear interpolation at zero-based position p * (n - 1)).
double quantile(std::span<const double> values, double p);

/// Throws empty_input on an empty sequence. Sample (n - 1) standard deviation,
/// zero for a single value.
StatSummary summarize(std::span<const double> values);

/// Metric names in serialization order; shared by CSV and JSON writers.
const std::vector<std::string>& metric_keys();

/// Value of a named metric (see metric_keys) from a report; nullopt for
/// knee-dependent metrics of an undefined knee.
std::optional<double> metric_value(const MetricsReport& report, std::string_view key);

struct SummaryRow {
  std::string label;
  std::string metric;
  StatSummary stats;
};

/// One row per (model label, metric), skipping failed trials and undefined values.
std::vector<SummaryRow> summarize_ensemble(std::span<const EnsembleRow> rows);

/// Same layout as summarize_ensemble with labels of the form "lambda=0.37".
std::vector<SummaryRow> summarize_ca_sweep(std::span<const CASweepRow> rows);

}  // namespace skiorder
