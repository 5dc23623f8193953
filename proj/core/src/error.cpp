#include "skiorder/error.hpp"

namespace skiorder {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::empty_input: return "empty-input";
    case ErrorCode::length_mismatch: return "length-mismatch";
    case ErrorCode::degenerate_matrix: return "degenerate-matrix";
    case ErrorCode::numerical: return "numerical";
    case ErrorCode::knee_undefined: return "knee-undefined";
    case ErrorCode::invalid_shape: return "invalid-shape";
    case ErrorCode::geometry: return "geometry";
    case ErrorCode::config: return "config";
    case ErrorCode::diverged: return "simulation-diverged";
    case ErrorCode::parse: return "parse";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

}  // namespace skiorder
