#include "skiorder/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <numeric>
#include <thread>

#include "skiorder/error.hpp"
#include "skiorder/random.hpp"

namespace skiorder {
namespace {

constexpr std::string_view kNoiseSuffix = "+noise";

// Index-parallel loop; each job writes only its own slot.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& job) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) job(i);
    });
  }
  for (auto& t : pool) t.join();
}

MetricsReport analyze(const SignalMatrix& x, double variance_floor, const MetricsOptions& opts) {
  return compute_all(preprocess(x, variance_floor), opts);
}

}  // namespace

std::string ModelVariant::label() const {
  std::string s = to_string(model);
  if (measurement_noise) s += kNoiseSuffix;
  return s;
}

std::optional<ModelVariant> ModelVariant::parse(std::string_view label) {
  ModelVariant v;
  if (label.size() > kNoiseSuffix.size() && label.ends_with(kNoiseSuffix)) {
    v.measurement_noise = true;
    label.remove_suffix(kNoiseSuffix.size());
  }
  const auto model = model_from_string(label);
  if (!model) return std::nullopt;
  v.model = *model;
  return v;
}

std::vector<ModelVariant> default_models() {
  return {
      {Model::pure_noise, false},    {Model::position_walk, false},
      {Model::kinematic_noise, false}, {Model::velocity_walk, false},
      {Model::acceleration_noise, false}, {Model::cucker_smale, true},
      {Model::vicsek, true},         {Model::spiral_in, true},
      {Model::cucker_smale, false},  {Model::vicsek, false},
      {Model::spiral_in, false},
  };
}

std::vector<EnsembleRow> run_ensemble(const EnsembleSpec& spec, unsigned threads) {
  if (spec.trials_per_model < 1) {
    throw Error(ErrorCode::config, "run_ensemble: trials_per_model must be >= 1");
  }
  const std::size_t total = spec.models.size() * spec.trials_per_model;
  std::vector<EnsembleRow> rows(total);

  parallel_for(total, threads, [&](std::size_t idx) {
    const std::size_t m = idx / spec.trials_per_model;
    const std::size_t t = idx % spec.trials_per_model;
    EnsembleRow& row = rows[idx];
    row.label = spec.models[m].label();
    row.model_index = m;
    row.trial = t;
    row.seed = derive_seed(spec.base_seed, m, t);

    SimConfig cfg = spec.sim_defaults;
    cfg.model = spec.models[m].model;
    cfg.measurement_noise = spec.models[m].measurement_noise;
    cfg.seed = row.seed;
    try {
      row.report = analyze(simulate(cfg), spec.variance_floor, spec.metrics);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });
  return rows;
}

std::vector<CASweepRow> run_ca_sweep(const CASweepSpec& spec, unsigned threads) {
  if (spec.seeds_per_lambda < 1) {
    throw Error(ErrorCode::config, "run_ca_sweep: seeds_per_lambda must be >= 1");
  }
  const std::size_t total = spec.lambdas.size() * spec.seeds_per_lambda;
  std::vector<CASweepRow> rows(total);

  parallel_for(total, threads, [&](std::size_t idx) {
    const std::size_t l = idx / spec.seeds_per_lambda;
    const std::size_t t = idx % spec.seeds_per_lambda;
    CASweepRow& row = rows[idx];
    row.lambda = spec.lambdas[l];
    row.lambda_index = l;
    row.trial = t;
    row.seed = derive_seed(spec.base_seed, l, t);

    CAConfig cfg = spec.ca_defaults;
    cfg.lambda = row.lambda;
    cfg.world_seed = row.seed;
    cfg.rule_seed = splitmix64(row.seed);
    try {
      row.report = analyze(run(cfg).to_signal_matrix(), spec.variance_floor, spec.metrics);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });
  return rows;
}

double quantile(std::span<const double> values, double p) {
  if (values.empty()) throw Error(ErrorCode::empty_input, "quantile: empty input");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = std::clamp(p, 0.0, 1.0) * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

StatSummary summarize(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::empty_input, "summarize: empty input");
  StatSummary s;
  s.n = values.size();
  const double n = static_cast<double>(s.n);
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std_sample = std::sqrt(ss / (n - 1.0));
  }
  s.median = quantile(values, 0.5);
  s.q1 = quantile(values, 0.25);
  s.q3 = quantile(values, 0.75);
  s.iqr = s.q3 - s.q1;
  return s;
}

const std::vector<std::string>& metric_keys() {
  static const std::vector<std::string> keys = {
      "normalized_sv_at_knee", "fraction_outside_bounds", "knee_outside_bounds",
      "normalized_knee_position", "area_after_knee", "knee_angle_deg",
      "curvature", "knee_vector_ratio", "kappa",
      "bound_lower", "bound_upper", "knee_index",
      "rank",
  };
  return keys;
}

std::optional<double> metric_value(const MetricsReport& r, std::string_view key) {
  if (key == "fraction_outside_bounds") return r.fraction_outside_bounds;
  if (key == "kappa") return r.bounds.kappa;
  if (key == "bound_lower") return r.bounds.lower;
  if (key == "bound_upper") return r.bounds.upper;
  if (key == "rank") return static_cast<double>(r.rank);
  if (!r.knee_defined) return std::nullopt;
  if (key == "normalized_sv_at_knee") return r.normalized_sv_at_knee;
  if (key == "knee_outside_bounds") return r.knee_outside_bounds ? 1.0 : 0.0;
  if (key == "normalized_knee_position") return r.normalized_knee_position;
  if (key == "area_after_knee") return r.area_after_knee;
  if (key == "knee_angle_deg") return r.knee_angle_deg;
  if (key == "curvature") return r.curvature;
  if (key == "knee_vector_ratio") return r.knee_vector_ratio;
  if (key == "knee_index") return static_cast<double>(r.knee->knee_index);
  return std::nullopt;
}

namespace {

std::vector<SummaryRow> summarize_labelled(
    std::span<const std::pair<std::string, const MetricsReport*>> items) {
  // Keep first-seen label order.
  std::vector<std::string> labels;
  std::map<std::string, std::vector<const MetricsReport*>> by_label;
  for (const auto& [label, report] : items) {
    if (!by_label.contains(label)) labels.push_back(label);
    auto& bucket = by_label[label];
    if (report) bucket.push_back(report);
  }

  std::vector<SummaryRow> out;
  for (const auto& label : labels) {
    for (const auto& key : metric_keys()) {
      std::vector<double> values;
      for (const MetricsReport* r : by_label[label]) {
        if (auto v = metric_value(*r, key)) values.push_back(*v);
      }
      if (values.empty()) continue;
      out.push_back({label, key, summarize(values)});
    }
  }
  return out;
}

}  // namespace

std::vector<SummaryRow> summarize_ensemble(std::span<const EnsembleRow> rows) {
  std::vector<std::pair<std::string, const MetricsReport*>> items;
  for (const auto& row : rows) items.emplace_back(row.label, row.report ? &*row.report : nullptr);
  return summarize_labelled(items);
}

std::vector<SummaryRow> summarize_ca_sweep(std::span<const CASweepRow> rows) {
  std::vector<std::pair<std::string, const MetricsReport*>> items;
  for (const auto& row : rows) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "lambda=%g", row.lambda);
    items.emplace_back(buf, row.report ? &*row.report : nullptr);
  }
  return summarize_labelled(items);
}

}  // namespace skiorder
