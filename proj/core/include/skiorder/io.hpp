#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "skiorder/ensemble.hpp"
#include "skiorder/lambda_ca.hpp"
#include "skiorder/metrics.hpp"
#include "skiorder/svknee.hpp"
#include "skiorder/trajmat.hpp"

namespace skiorder {

/// 17 significant digits, locale independent; round-trips any double.
std::string format_double(double value);

// Trajectory CSV: one row per signal, one column per timestep. With a header
// `label,t0,t1,...` every data row starts with its label.
void write_matrix_csv(std::ostream& out, const SignalMatrix& x, bool with_labels = false);

/// Throws parse with a 1-based row/column location for malformed cells and
/// ragged rows, and invalid_shape when fewer than two columns remain.
SignalMatrix read_matrix_csv(std::istream& in);

SignalMatrix read_matrix_csv_file(const std::string& path);
void write_matrix_csv_file(const std::string& path, const SignalMatrix& x, bool with_labels = false);

/// Flat JSON object keyed by metric_keys(). For an undefined knee the
/// knee-dependent keys are null and "knee": "undefined" is added.
std::string metrics_json(const MetricsReport& report);

/// index,sigma,x_norm,y_norm rows over the ranked singular values.
void write_curve_csv(std::ostream& out, const SingularCurve& curve);

/// model,trial,seed,status followed by metric_keys() columns.
void write_ensemble_csv(std::ostream& out, std::span<const EnsembleRow> rows);
/// lambda,trial,seed,status followed by metric_keys() columns.
void write_ca_sweep_csv(std::ostream& out, std::span<const CASweepRow> rows);
/// model,metric,n,mean,median,std_sample,q1,q3,iqr.
void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows);

/// Binary PGM (P5) with states spread over 0..255; rows are cells.
void write_pgm(std::ostream& out, const CATrace& trace);

}  // namespace skiorder
