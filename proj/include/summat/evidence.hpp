#pragma once

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "summat/scalar.hpp"

namespace summat {

enum class Status { holds, fails, inconclusive };

std::string to_string(Status s);

/// Thresholds shared by every numeric verdict.
struct EvidenceConfig {
  double tol = 1e-6;
  double grid_ratio = 1.3;
  /// A value within sup * (1 - sup_slack) counts as attaining the sup.
  double sup_slack = 1e-3;
  /// Tail slope of log(running sup) vs log(n+1) at or below this: bounded.
  double bounded_slope = 0.01;
  /// Tail slope at or above this with a strictly growing running sup: unbounded.
  double growth_slope = 0.1;
  /// Tail envelope slope at or below -vanish_slope: vanishing.
  double vanish_slope = 0.25;
  /// Tail envelope slope at or above -flat_slope (and not below tol): not vanishing.
  double flat_slope = 0.01;
  /// Tail window starts at horizon / tail_divisor.
  index_t tail_divisor = 8;
};

/// Rows 0, 1, ... growing geometrically by ratio (at least by 1), ending at N-1.
std::vector<index_t> probe_grid(index_t N, double ratio);

struct Series {
  std::vector<index_t> rows;
  std::vector<double> values;

  static Series sample(const std::vector<index_t>& rows, const std::function<double(index_t)>& f);
};

struct Evidence {
  Status status = Status::inconclusive;
  double sup = 0.0;
  double last = 0.0;
  /// Tail slope used by the rule (running sup for boundedness, envelope for decay).
  double slope = 0.0;
  index_t horizon = 0;
  index_t window_start = 0;
  index_t window_size = 0;
  std::vector<index_t> witness_rows;
  std::string note;
};

/// Least-squares slope of ys against xs.
double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys);

/// Decide sup_n v_n < infinity from values on rows < horizon.
Evidence assess_bounded(const Series& s, index_t horizon, const EvidenceConfig& cfg);

/// Decide v_n -> 0 from values on rows < horizon.
Evidence assess_vanishing(const Series& s, index_t horizon, const EvidenceConfig& cfg);

/// Worst case of a set of verdicts: fails beats inconclusive beats holds.
Status conjunction(const std::vector<Status>& parts);

nlohmann::json to_json(const Evidence& e);

}  // namespace summat
