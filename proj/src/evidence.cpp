#include "summat/evidence.hpp"

#include <algorithm>
#include <cmath>

namespace summat {

std::string to_string(Status s) {
  switch (s) {
    case Status::holds:
      return "holds";
    case Status::fails:
      return "fails";
    case Status::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::vector<index_t> probe_grid(index_t N, double ratio) {
  if (N == 0) return {};
  if (!(ratio > 1.0)) throw DomainError("probe grid ratio must exceed 1");
  std::vector<index_t> rows;
  double x = 0.0;
  index_t n = 0;
  while (n < N) {
    rows.push_back(n);
    x = std::max(x * ratio, static_cast<double>(n + 1));
    n = static_cast<index_t>(std::floor(x));
  }
  if (rows.back() != N - 1) rows.push_back(N - 1);
  return rows;
}

Series Series::sample(const std::vector<index_t>& rows, const std::function<double(index_t)>& f) {
  Series s;
  s.rows = rows;
  s.values.reserve(rows.size());
  for (index_t r : rows) s.values.push_back(f(r));
  return s;
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double m = static_cast<double>(xs.size());
  if (xs.size() < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double denom = m * sxx - sx * sx;
  if (denom == 0.0) return 0.0;
  return (m * sxy - sx * sy) / denom;
}

namespace {

constexpr double kLogFloor = -690.0;  // log of ~1e-300

double safe_log(double v) { return v > 0.0 ? std::max(std::log(v), kLogFloor) : kLogFloor; }

struct Window {
  std::vector<std::size_t> idx;  // positions into the series
};

Window tail_window(const Series& s, index_t horizon, const EvidenceConfig& cfg) {
  Window w;
  index_t start = horizon / cfg.tail_divisor;
  for (std::size_t i = 0; i < s.rows.size(); ++i) {
    if (s.rows[i] >= start && s.rows[i] < horizon) w.idx.push_back(i);
  }
  return w;
}

void check_series(const Series& s) {
  if (s.rows.size() != s.values.size()) throw DimensionError("series rows/values mismatch");
  for (double v : s.values) {
    if (!std::isfinite(v)) throw ArithmeticError("non-finite value in evidence series");
  }
}

}  // namespace

Evidence assess_bounded(const Series& s, index_t horizon, const EvidenceConfig& cfg) {
  check_series(s);
  Evidence e;
  e.horizon = horizon;
  std::vector<double> running(s.values.size());
  double best = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    if (s.rows[i] >= horizon) break;
    best = std::max(best, std::fabs(s.values[i]));
    running[i] = best;
    used = i + 1;
  }
  if (used == 0) {
    e.note = "no probed rows";
    return e;
  }
  e.sup = best;
  e.last = std::fabs(s.values[used - 1]);
  index_t attained = 0;
  for (std::size_t i = 0; i < used; ++i) {
    if (std::fabs(s.values[i]) >= best * (1.0 - cfg.sup_slack)) {
      attained = s.rows[i];
      break;
    }
  }
  e.witness_rows = {attained, s.rows[used - 1]};

  Window w = tail_window(s, horizon, cfg);
  e.window_start = w.idx.empty() ? 0 : s.rows[w.idx.front()];
  e.window_size = w.idx.size();
  if (best == 0.0) {
    e.status = Status::holds;
    e.note = "identically zero";
    return e;
  }
  std::vector<double> xs, ys;
  bool strictly_growing = true;
  for (std::size_t j = 0; j < w.idx.size(); ++j) {
    std::size_t i = w.idx[j];
    xs.push_back(std::log(static_cast<double>(s.rows[i]) + 1.0));
    ys.push_back(safe_log(running[i]));
    if (j > 0 && !(running[i] > running[w.idx[j - 1]])) strictly_growing = false;
  }
  e.slope = fit_slope(xs, ys);
  if (w.idx.size() < 3) {
    e.note = "tail window too short";
    return e;
  }
  // A running sup that still creeps up but decelerates (c - a/n) is bounded;
  // polynomial or logarithmic growth keeps its slope across the window.
  bool decelerating = false;
  if (w.idx.size() >= 6) {
    const std::size_t half = xs.size() / 2;
    std::vector<double> x1(xs.begin(), xs.begin() + half), y1(ys.begin(), ys.begin() + half);
    std::vector<double> x2(xs.begin() + half, xs.end()), y2(ys.begin() + half, ys.end());
    decelerating = fit_slope(x2, y2) <= 0.5 * fit_slope(x1, y1);
  }
  if (e.slope <= cfg.bounded_slope && attained < horizon / 2) {
    e.status = Status::holds;
  } else if (decelerating && e.slope < cfg.growth_slope) {
    e.note = "running sup decelerates";
    e.status = Status::holds;
  } else if (e.slope >= cfg.growth_slope && strictly_growing) {
    e.status = Status::fails;
  } else {
    e.note = "between thresholds";
  }
  return e;
}

Evidence assess_vanishing(const Series& s, index_t horizon, const EvidenceConfig& cfg) {
  check_series(s);
  Evidence e;
  e.horizon = horizon;
  std::size_t used = 0;
  for (std::size_t i = 0; i < s.values.size() && s.rows[i] < horizon; ++i) {
    e.sup = std::max(e.sup, std::fabs(s.values[i]));
    used = i + 1;
  }
  if (used == 0) {
    e.note = "no probed rows";
    return e;
  }
  e.last = std::fabs(s.values[used - 1]);
  Window w = tail_window(s, horizon, cfg);
  e.window_start = w.idx.empty() ? 0 : s.rows[w.idx.front()];
  e.window_size = w.idx.size();
  if (w.idx.size() < 3) {
    e.note = "tail window too short";
    return e;
  }
  // Envelope E_i = max_{j >= i} |v_j| within the window.
  std::vector<double> env(w.idx.size());
  double tail_max = 0.0;
  index_t tail_arg = s.rows[w.idx.front()];
  double acc = 0.0;
  for (std::size_t j = w.idx.size(); j-- > 0;) {
    acc = std::max(acc, std::fabs(s.values[w.idx[j]]));
    env[j] = acc;
  }
  for (std::size_t j = 0; j < w.idx.size(); ++j) {
    double v = std::fabs(s.values[w.idx[j]]);
    if (v > tail_max) {
      tail_max = v;
      tail_arg = s.rows[w.idx[j]];
    }
  }
  std::vector<double> xs, ys;
  for (std::size_t j = 0; j < w.idx.size(); ++j) {
    xs.push_back(std::log(static_cast<double>(s.rows[w.idx[j]]) + 1.0));
    ys.push_back(safe_log(env[j]));
  }
  e.slope = fit_slope(xs, ys);
  e.witness_rows = {tail_arg, s.rows[used - 1]};
  if (tail_max < cfg.tol) {
    e.status = Status::holds;
    e.note = "tail below tolerance";
  } else if (e.slope <= -cfg.vanish_slope) {
    e.status = Status::holds;
    e.note = "tail envelope decays";
  } else if (e.slope >= -cfg.flat_slope) {
    e.status = Status::fails;
    e.note = "tail envelope does not decay";
  } else {
    e.note = "slow decay, between thresholds";
  }
  return e;
}

Status conjunction(const std::vector<Status>& parts) {
  bool any_inconclusive = false;
  for (Status s : parts) {
    if (s == Status::fails) return Status::fails;
    if (s == Status::inconclusive) any_inconclusive = true;
  }
  return any_inconclusive ? Status::inconclusive : Status::holds;
}

nlohmann::json to_json(const Evidence& e) {
  return nlohmann::json{{"status", to_string(e.status)},
                        {"sup", e.sup},
                        {"last", e.last},
                        {"slope", e.slope},
                        {"horizon", e.horizon},
                        {"window_start", e.window_start},
                        {"window_size", e.window_size},
                        {"witness_rows", e.witness_rows},
                        {"note", e.note}};
}

}  // namespace summat
