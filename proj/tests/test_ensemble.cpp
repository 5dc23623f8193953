#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "skiorder/ensemble.hpp"
#include "skiorder/error.hpp"
#include "skiorder/io.hpp"
#include "skiorder/random.hpp"

using namespace skiorder;

TEST(Summarize, FourValues) {
  const std::vector<double> v = {1, 2, 3, 4};
  const StatSummary s = summarize(v);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_DOUBLE_EQ(s.median, 2.5);
  EXPECT_NEAR(s.std_sample, 1.2909944487358056, 1e-15);
  EXPECT_DOUBLE_EQ(s.q1, 1.75);
  EXPECT_DOUBLE_EQ(s.q3, 3.25);
  EXPECT_DOUBLE_EQ(s.iqr, 1.5);
  EXPECT_EQ(s.n, 4u);
}

TEST(Summarize, Singleton) {
  const std::vector<double> v = {5};
  const StatSummary s = summarize(v);
  EXPECT_EQ(s.mean, 5.0);
  EXPECT_EQ(s.median, 5.0);
  EXPECT_EQ(s.std_sample, 0.0);
  EXPECT_EQ(s.iqr, 0.0);
}

TEST(Summarize, ConstantAndEmpty) {
  const std::vector<double> v = {1, 1, 1};
  const StatSummary s = summarize(v);
  EXPECT_EQ(s.std_sample, 0.0);
  EXPECT_EQ(s.iqr, 0.0);
  EXPECT_THROW(summarize(std::vector<double>{}), Error);
}

TEST(Summarize, QuantileEndpoints) {
  const std::vector<double> v = {4, 1, 3};
  EXPECT_EQ(quantile(v, 0.0), 1.0);
  EXPECT_EQ(quantile(v, 1.0), 4.0);
  EXPECT_EQ(quantile(v, 0.5), 3.0);
  EXPECT_DOUBLE_EQ(quantile(v, 0.25), 2.0);
}

TEST(Summarize, PermutationAndAffine) {
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(static_cast<std::size_t>(rng.uniform_int(1, 40)));
    for (auto& x : v) x = rng.normal() * 3.0 + 1.0;
    const StatSummary s = summarize(v);

    std::vector<double> p = v;
    std::reverse(p.begin(), p.end());
    std::rotate(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(p.size() / 2), p.end());
    const StatSummary sp = summarize(p);
    EXPECT_NEAR(sp.mean, s.mean, 1e-12);
    EXPECT_EQ(sp.median, s.median);
    EXPECT_EQ(sp.q1, s.q1);
    EXPECT_EQ(sp.q3, s.q3);
    EXPECT_NEAR(sp.std_sample, s.std_sample, 1e-12);

    const double a = trial % 2 ? -2.5 : 0.75;
    const double b = 4.0;
    std::vector<double> w = v;
    for (auto& x : w) x = a * x + b;
    const StatSummary sw = summarize(w);
    EXPECT_NEAR(sw.mean, a * s.mean + b, 1e-12);
    EXPECT_NEAR(sw.median, a * s.median + b, 1e-12);
    EXPECT_NEAR(sw.std_sample, std::abs(a) * s.std_sample, 1e-12);
    EXPECT_NEAR(sw.iqr, std::abs(a) * s.iqr, 1e-12);
    EXPECT_LE(sw.q1, sw.median);
    EXPECT_LE(sw.median, sw.q3);
  }
}

TEST(ModelVariant, Labels) {
  const auto models = default_models();
  ASSERT_EQ(models.size(), 11u);
  EXPECT_EQ(models.front().label(), "pure_noise");
  EXPECT_EQ(models[5].label(), "cucker_smale+noise");
  EXPECT_EQ(models.back().label(), "spiral_in");
  for (const auto& m : models) EXPECT_EQ(ModelVariant::parse(m.label()), m);
  EXPECT_FALSE(ModelVariant::parse("vicsek+").has_value());
  EXPECT_FALSE(ModelVariant::parse("boids").has_value());
}

TEST(Ensemble, SingleTrial) {
  EnsembleSpec spec;
  spec.models = {{Model::pure_noise, false}};
  spec.trials_per_model = 1;
  spec.sim_defaults.n_agents = 10;
  spec.sim_defaults.n_steps = 60;
  const auto rows = run_ensemble(spec);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_TRUE(rows[0].report.has_value());
  EXPECT_EQ(rows[0].seed, derive_seed(0, 0, 0));
}

TEST(Ensemble, RowCountOrderAndDeterminism) {
  EnsembleSpec spec;
  spec.trials_per_model = 3;
  spec.base_seed = 12;
  spec.sim_defaults.n_agents = 8;
  spec.sim_defaults.n_steps = 80;
  const auto serial = run_ensemble(spec, 1);
  ASSERT_EQ(serial.size(), 33u);
  EXPECT_EQ(serial[3].label, "position_walk");
  EXPECT_EQ(serial[3].trial, 0u);
  EXPECT_EQ(serial[3].seed, derive_seed(12, 1, 0));

  const auto parallel = run_ensemble(spec, 4);
  std::ostringstream a, b;
  write_ensemble_csv(a, serial);
  write_ensemble_csv(b, parallel);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Ensemble, FailuresAreRecorded) {
  EnsembleSpec spec;
  spec.models = {{Model::pure_noise, false}};
  spec.trials_per_model = 2;
  spec.sim_defaults.n_steps = 1;  // invalid
  const auto rows = run_ensemble(spec);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) {
    EXPECT_FALSE(r.report.has_value());
    EXPECT_FALSE(r.error.empty());
  }
  EXPECT_TRUE(summarize_ensemble(rows).empty());
}

TEST(Ensemble, SummaryLayout) {
  EnsembleSpec spec;
  spec.models = {{Model::pure_noise, false}, {Model::vicsek, true}};
  spec.trials_per_model = 4;
  spec.sim_defaults.n_agents = 10;
  spec.sim_defaults.n_steps = 100;
  const auto rows = run_ensemble(spec);
  const auto summary = summarize_ensemble(rows);
  ASSERT_EQ(summary.size(), 2 * metric_keys().size());
  EXPECT_EQ(summary.front().label, "pure_noise");
  EXPECT_EQ(summary.front().metric, metric_keys().front());
  EXPECT_EQ(summary.back().label, "vicsek+noise");
  EXPECT_EQ(summary.front().stats.n, 4u);
}

TEST(CASweep, SmallSweep) {
  CASweepSpec spec;
  spec.lambdas = {0.0, 0.37};
  spec.seeds_per_lambda = 2;
  spec.base_seed = 3;
  spec.ca_defaults.n_cells = 60;
  spec.ca_defaults.n_steps = 80;
  const auto rows = run_ca_sweep(spec, 2);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[2].lambda, 0.37);
  EXPECT_EQ(rows[2].seed, derive_seed(3, 1, 0));
  // lambda = 0 leaves one live column, which gives a rank-1 matrix or nothing at all.
  EXPECT_TRUE(!rows[0].report || !rows[0].report->knee_defined);
  const auto summary = summarize_ca_sweep(rows);
  ASSERT_FALSE(summary.empty());
  EXPECT_EQ(summary.back().label, "lambda=0.37");

  std::ostringstream a, b;
  write_ca_sweep_csv(a, rows);
  write_ca_sweep_csv(b, run_ca_sweep(spec, 1));
  EXPECT_EQ(a.str(), b.str());
}

TEST(MetricValue, UndefinedKnee) {
  MetricsReport r;
  r.knee_defined = false;
  r.rank = 2;
  EXPECT_FALSE(metric_value(r, "knee_angle_deg").has_value());
  EXPECT_EQ(metric_value(r, "rank"), 2.0);
  EXPECT_EQ(metric_keys().size(), 13u);
}
