#include "summat/operator_lab.hpp"

#include <random>

namespace summat {

std::string to_string(NormKind k) { return k == NormKind::sup ? "sup" : "euclidean"; }

std::string to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::power:
      return "power";
    case FamilyKind::shift:
      return "shift";
    case FamilyKind::coordinate:
      return "coordinate";
  }
  return "?";
}

std::string to_string(FamilyMode m) { return m == FamilyMode::bounded ? "bounded" : "null"; }

double euclidean_norm(const DenseMatrix<double>& m, double tol, int max_iter) {
  const index_t n = m.cols();
  if (n == 0 || m.max_abs_entry() == 0.0) return 0.0;
  // Start off every coordinate axis so the dominant direction has weight.
  std::vector<double> v(n);
  for (index_t i = 0; i < n; ++i) v[i] = 1.0 + 0.37 * static_cast<double>(i + 1) / static_cast<double>(n);
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    double vn = 0.0;
    for (double x : v) vn += x * x;
    vn = std::sqrt(vn);
    for (double& x : v) x /= vn;
    std::vector<double> mv = m.apply(v);
    std::vector<double> w(n, 0.0);
    for (index_t i = 0; i < m.rows(); ++i)
      for (index_t j = 0; j < n; ++j) w[j] += m(i, j) * mv[i];
    double next = 0.0;
    for (index_t j = 0; j < n; ++j) next += w[j] * v[j];
    v = std::move(w);
    if (std::fabs(next - lambda) <= tol * std::max(1.0, std::fabs(next))) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(std::max(lambda, 0.0));
}

void Trajectory::write_csv(std::ostream& os) const {
  os << "n,norm,diff_norm\n";
  for (std::size_t n = 0; n < norms.size(); ++n) {
    os << n << ',' << format_double(norms[n]) << ',' << format_double(diffs[n]) << '\n';
  }
}

nlohmann::json to_json(const LabVerdict& v) {
  return nlohmann::json{
      {"status", to_string(v.status)}, {"note", v.note}, {"evidence", to_json(v.evidence)}};
}

namespace {

nlohmann::json matrix_json(const DenseMatrix<double>& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (index_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return rows;
}

}  // namespace

nlohmann::json to_json(const ErgodicVerdict& v) {
  nlohmann::json probes = nlohmann::json::array();
  for (const auto& p : v.probes) {
    probes.push_back({{"probe", p.probe},
                      {"convergence", to_json(p.convergence)},
                      {"null", to_json(p.null)},
                      {"limit_T_invariant", to_json(p.limit_T_invariant)},
                      {"residual_sup", p.residual_sup},
                      {"residual_last", p.residual_last},
                      {"limit", p.limit}});
  }
  return nlohmann::json{{"matrix", v.matrix_id},
                        {"operator", v.operator_id},
                        {"depth", v.depth},
                        {"tol", v.tol},
                        {"norm", to_string(v.norm)},
                        {"bounded", to_json(v.bounded)},
                        {"ergodic", to_json(v.ergodic)},
                        {"null", to_json(v.null)},
                        {"delta_A_null", to_json(v.delta_A_null)},
                        {"A_delta_null", to_json(v.A_delta_null)},
                        {"limit_T_invariant", to_json(v.limit_T_invariant)},
                        {"limit_T_invariant_probes", to_json(v.limit_T_invariant_probes)},
                        {"first_column", to_json(v.first_column)},
                        {"P", matrix_json(v.P)},
                        {"probes", probes}};
}

nlohmann::json to_json(const EberleinReport& r) {
  auto num = [](double x) { return std::isnan(x) ? nlohmann::json(nullptr) : nlohmann::json(x); };
  return nlohmann::json{{"limit_exists", r.limit_exists},
                        {"convergence", to_json(r.convergence)},
                        {"growth", to_json(r.growth)},
                        {"y", r.y},
                        {"fixed_point_residual", num(r.fixed_point_residual)},
                        {"hull_distance", num(r.hull_distance)},
                        {"hull_gap", r.hull.gap},
                        {"hull_iterations", r.hull.iterations},
                        {"hull_vertices", r.hull_vertices}};
}

nlohmann::json to_json(const FamilyVerdict& v) {
  nlohmann::json probes = nlohmann::json::array();
  for (const auto& [name, e] : v.probes) probes.push_back({{"probe", name}, {"evidence", to_json(e)}});
  nlohmann::json out{{"family", to_string(v.family)},
                     {"mode", to_string(v.mode)},
                     {"pair", {{"A", v.a_id}, {"B", v.b_id}}},
                     {"status", to_string(v.status)},
                     {"numeric", to_string(v.numeric)},
                     {"analytic", v.analytic ? nlohmann::json(to_string(*v.analytic))
                                             : nlohmann::json(nullptr)},
                     {"rationale", v.rationale},
                     {"evidence", to_json(v.evidence)},
                     {"rows", v.rows},
                     {"norms", v.norms},
                     {"witness_row", v.witness_row},
                     {"witness_value", v.witness_value},
                     {"witness_norm", v.witness_norm},
                     {"n_dim", v.n_dim},
                     {"depth", v.depth},
                     {"caveat", v.caveat}};
  if (v.family == FamilyKind::coordinate) {
    out["row_abs_sum"] = v.row_abs_sums;
    out["probes"] = probes;
  }
  return out;
}

nlohmann::json to_json(const TransferProbe& p) {
  return nlohmann::json{{"applicable", p.applicable},
                        {"status", to_string(p.status)},
                        {"note", p.note},
                        {"pair_2C", to_string(p.pair_2C.status)},
                        {"a_residual", to_json(p.a_residual)},
                        {"b_residual", to_json(p.b_residual)},
                        {"K_C", p.K_C},
                        {"bound_holds", p.bound_holds},
                        {"worst_margin", p.worst_margin},
                        {"worst_row", p.worst_row}};
}

double uniform_from_bits(std::uint64_t bits, double lo, double hi) {
  double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

JordanSearch find_cesaro_bounded_growing_powers(std::uint64_t seed, index_t N, int max_attempts,
                                                const EvidenceConfig& cfg) {
  std::mt19937_64 rng(seed);
  JordanSearch out;
  const std::vector<std::vector<double>> probes{{1.0, 0.0}, {0.0, 1.0}};
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    out.attempts = attempt;
    double p00 = uniform_from_bits(rng(), -1, 1), p01 = uniform_from_bits(rng(), -1, 1);
    double p10 = uniform_from_bits(rng(), -1, 1), p11 = uniform_from_bits(rng(), -1, 1);
    double s = uniform_from_bits(rng(), 0.5, 2.0);
    double det = p00 * p11 - p01 * p10;
    if (std::fabs(det) < 0.2) continue;
    // T = P J P^{-1} with J = [[-1, s], [0, -1]].
    DenseMatrix<double> P(2, 2), Pinv(2, 2), J(2, 2);
    P(0, 0) = p00, P(0, 1) = p01, P(1, 0) = p10, P(1, 1) = p11;
    Pinv(0, 0) = p11 / det, Pinv(0, 1) = -p01 / det, Pinv(1, 0) = -p10 / det,
    Pinv(1, 1) = p00 / det;
    J(0, 0) = -1.0, J(0, 1) = s, J(1, 1) = -1.0;
    FiniteOperator<double> t("jordan-conjugate#" + std::to_string(attempt), P * J * Pinv);
    auto fam = SequenceFamily<double>::power(t);
    auto powers = classify(make_identity<double>(), fam, probes, N, cfg);
    if (powers.bounded.status != Status::fails) continue;
    auto cesaro = classify(make_cesaro<double>(), fam, probes, N, cfg);
    if (cesaro.bounded.status != Status::holds) continue;
    out.op = t;
    out.power_run = std::move(powers);
    out.cesaro_run = std::move(cesaro);
    return out;
  }
  return out;
}

}  // namespace summat
