#include "skiorder/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <system_error>
#include <vector>

#include "skiorder/error.hpp"

namespace skiorder {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::string location(std::size_t row, std::size_t col) {
  return "row " + std::to_string(row) + ", column " + std::to_string(col);
}

std::string json_number(std::optional<double> v) {
  return v ? format_double(*v) : std::string("null");
}

void write_metric_columns(std::ostream& out, const std::optional<MetricsReport>& report) {
  for (const auto& key : metric_keys()) {
    out << ',';
    if (!report) continue;
    if (auto v = metric_value(*report, key)) out << format_double(*v);
  }
}

const char* status_of(const std::optional<MetricsReport>& report) {
  if (!report) return "error";
  return report->knee_defined ? "ok" : "knee_undefined";
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_matrix_csv(std::ostream& out, const SignalMatrix& x, bool with_labels) {
  const Eigen::Index m = x.values.rows();
  const Eigen::Index n = x.values.cols();
  if (with_labels) {
    out << "label";
    for (Eigen::Index t = 0; t < n; ++t) out << ",t" << t;
    out << '\n';
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    if (with_labels) {
      const RowLabel lab = static_cast<std::size_t>(i) < x.row_labels.size()
                               ? x.row_labels[static_cast<std::size_t>(i)]
                               : RowLabel{static_cast<std::size_t>(i), -1};
      if (lab.dimension < 0) {
        out << 's' << lab.source;
      } else if (lab.dimension < 3) {
        out << 'a' << lab.source << '.' << "xyz"[lab.dimension];
      } else {
        out << 'a' << lab.source << ".d" << lab.dimension;
      }
      out << ',';
    }
    for (Eigen::Index t = 0; t < n; ++t) {
      if (t) out << ',';
      out << format_double(x.values(i, t));
    }
    out << '\n';
  }
}

SignalMatrix read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  bool labelled = false;
  std::size_t width = 0;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    auto cells = split(view);
    if (rows.empty() && !labelled && cells.front() == "label") {
      labelled = true;
      continue;
    }
    const std::size_t first = labelled ? 1 : 0;
    if (cells.size() <= first) {
      throw Error(ErrorCode::parse, "no numeric cells at " + location(line_no, 1));
    }
    std::vector<double> row;
    row.reserve(cells.size() - first);
    for (std::size_t c = first; c < cells.size(); ++c) {
      const std::string_view cell = cells[c];
      double value = 0.0;
      const char* begin = cell.data();
      const char* end = cell.data() + cell.size();
      if (!cell.empty() && *begin == '+') ++begin;
      const auto res = std::from_chars(begin, end, value);
      if (cell.empty() || res.ec != std::errc() || res.ptr != end) {
        throw Error(ErrorCode::parse, "non-numeric cell '" + std::string(cell) + "' at " +
                                          location(line_no, c + 1));
      }
      row.push_back(value);
    }
    if (rows.empty()) {
      width = row.size();
    } else if (row.size() != width) {
      throw Error(ErrorCode::parse, "expected " + std::to_string(width) + " values, found " +
                                        std::to_string(row.size()) + " at " +
                                        location(line_no, row.size() + first));
    }
    rows.push_back(std::move(row));
  }

  if (rows.empty()) throw Error(ErrorCode::empty_input, "CSV contains no data rows");
  if (width < 2) {
    throw Error(ErrorCode::invalid_shape, "CSV needs at least 2 timesteps per row");
  }
  Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t t = 0; t < width; ++t) {
      values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) = rows[i][t];
    }
  }
  return SignalMatrix::from_rows(std::move(values));
}

SignalMatrix read_matrix_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path + "' for reading");
  return read_matrix_csv(in);
}

void write_matrix_csv_file(const std::string& path, const SignalMatrix& x, bool with_labels) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot open '" + path + "' for writing");
  write_matrix_csv(out, x, with_labels);
  if (!out) throw Error(ErrorCode::io, "failed writing '" + path + "'");
}

std::string metrics_json(const MetricsReport& report) {
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (const auto& key : metric_keys()) {
    if (!first) out << ',';
    first = false;
    out << '"' << key << "\":" << json_number(metric_value(report, key));
  }
  if (!report.knee_defined) out << ",\"knee\":\"undefined\"";
  out << '}';
  return out.str();
}

void write_curve_csv(std::ostream& out, const SingularCurve& curve) {
  out << "index,sigma,x_norm,y_norm\n";
  const double r = static_cast<double>(curve.rank);
  for (std::size_t i = 0; i < curve.rank; ++i) {
    out << (i + 1) << ',' << format_double(curve.sigmas[i]) << ','
        << format_double(static_cast<double>(i + 1) / r) << ','
        << format_double(curve.sigmas[i] / curve.sigmas.front()) << '\n';
  }
}

void write_ensemble_csv(std::ostream& out, std::span<const EnsembleRow> rows) {
  out << "model,trial,seed,status";
  for (const auto& key : metric_keys()) out << ',' << key;
  out << '\n';
  for (const auto& row : rows) {
    out << row.label << ',' << row.trial << ',' << row.seed << ',' << status_of(row.report);
    write_metric_columns(out, row.report);
    out << '\n';
  }
}

void write_ca_sweep_csv(std::ostream& out, std::span<const CASweepRow> rows) {
  out << "lambda,trial,seed,status";
  for (const auto& key : metric_keys()) out << ',' << key;
  out << '\n';
  for (const auto& row : rows) {
    out << format_double(row.lambda) << ',' << row.trial << ',' << row.seed << ','
        << status_of(row.report);
    write_metric_columns(out, row.report);
    out << '\n';
  }
}

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows) {
  out << "model,metric,n,mean,median,std_sample,q1,q3,iqr\n";
  for (const auto& row : rows) {
    const StatSummary& s = row.stats;
    out << row.label << ',' << row.metric << ',' << s.n << ',' << format_double(s.mean) << ','
        << format_double(s.median) << ',' << format_double(s.std_sample) << ','
        << format_double(s.q1) << ',' << format_double(s.q3) << ',' << format_double(s.iqr)
        << '\n';
  }
}

void write_pgm(std::ostream& out, const CATrace& trace) {
  const auto& g = trace.grid;
  const int top = std::max(1, trace.rules.states - 1);
  out << "P5\n" << g.cols() << ' ' << g.rows() << "\n255\n";
  for (Eigen::Index c = 0; c < g.rows(); ++c) {
    for (Eigen::Index t = 0; t < g.cols(); ++t) {
      out.put(static_cast<char>(g(c, t) * 255 / top));
    }
  }
}

}  // namespace skiorder
