#include <gtest/gtest.h>

#include <nlohmann/json.hpp>
#include <sstream>

#include "skiorder/error.hpp"
#include "skiorder/ensemble.hpp"
#include "skiorder/io.hpp"
#include "skiorder/swarmsim.hpp"

using namespace skiorder;

TEST(FormatDouble, RoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(MatrixCsv, RoundTripIsExact) {
  SimConfig c;
  c.model = Model::vicsek;
  c.n_agents = 5;
  c.n_steps = 30;
  c.seed = 2;
  const SignalMatrix x = simulate(c);
  for (bool labels : {false, true}) {
    std::stringstream s;
    write_matrix_csv(s, x, labels);
    const SignalMatrix y = read_matrix_csv(s);
    EXPECT_EQ(y.values, x.values);
  }
}

TEST(MatrixCsv, LabelledHeader) {
  SimConfig c;
  c.n_agents = 2;
  c.n_steps = 3;
  std::ostringstream s;
  write_matrix_csv(s, simulate(c), true);
  const std::string text = s.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "label,t0,t1,t2");
  EXPECT_NE(text.find("\na1.y,"), std::string::npos);
}

TEST(MatrixCsv, ParseErrorLocation) {
  std::istringstream in("1,2,3\n4,abc,6\n");
  try {
    read_matrix_csv(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::parse);
    EXPECT_NE(std::string(e.what()).find("row 2, column 2"), std::string::npos) << e.what();
  }
}

TEST(MatrixCsv, ShapeErrors) {
  std::istringstream ragged("1,2,3\n4,5\n");
  EXPECT_THROW(read_matrix_csv(ragged), Error);
  std::istringstream narrow("1\n2\n");
  try {
    read_matrix_csv(narrow);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_shape);
  }
  std::istringstream empty("\n\n");
  try {
    read_matrix_csv(empty);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::empty_input);
  }
  EXPECT_THROW(read_matrix_csv_file("/nonexistent/dir/x.csv"), Error);
}

TEST(MetricsJson, Keys) {
  const MetricsReport r = compute_all(curve_from_sigmas({10, 5, 1, 0.9, 0.8, 0.7}, 6, 100));
  const auto j = nlohmann::json::parse(metrics_json(r));
  ASSERT_EQ(j.size(), metric_keys().size());
  for (const auto& key : metric_keys()) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["knee_index"], 3);
  EXPECT_EQ(j["rank"], 6);
  EXPECT_EQ(j["normalized_sv_at_knee"].get<double>(), 0.1);
}

TEST(MetricsJson, UndefinedKnee) {
  const MetricsReport r = compute_all(curve_from_sigmas({2, 1}, 2, 10));
  const auto j = nlohmann::json::parse(metrics_json(r));
  EXPECT_EQ(j["knee"], "undefined");
  EXPECT_TRUE(j["knee_angle_deg"].is_null());
  EXPECT_EQ(j["rank"], 2);
}

TEST(CurveCsv, Columns) {
  std::ostringstream s;
  write_curve_csv(s, curve_from_sigmas({4, 2, 1}, 3, 5));
  EXPECT_EQ(s.str(), "index,sigma,x_norm,y_norm\n1,4,0.33333333333333331,1\n"
                     "2,2,0.66666666666666663,0.5\n3,1,1,0.25\n");
}

TEST(SummaryCsv, Header) {
  const std::vector<SummaryRow> rows = {{"m", "rank", summarize(std::vector<double>{1, 2})}};
  std::ostringstream s;
  write_summary_csv(s, rows);
  EXPECT_EQ(s.str(), "model,metric,n,mean,median,std_sample,q1,q3,iqr\n"
                     "m,rank,2,1.5,1.5,0.70710678118654757,1.25,1.75,0.5\n");
}

TEST(Pgm, Header) {
  CAConfig c;
  c.n_cells = 6;
  c.n_steps = 4;
  c.dead_probability = 1.0;
  std::ostringstream s;
  write_pgm(s, run(c));
  const std::string text = s.str();
  EXPECT_EQ(text.substr(0, 11), "P5\n4 6\n255\n");
  EXPECT_EQ(text.size(), 11u + 24u);
}
