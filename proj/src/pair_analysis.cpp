#include "summat/pair_analysis.hpp"

#include <charconv>

namespace summat {

std::string to_string(Property p) {
  switch (p) {
    case Property::star_C:
      return "*C";
    case Property::star_2C:
      return "*2C";
    case Property::star_3C:
      return "*3C";
  }
  return "?";
}

std::optional<Property> parse_property(std::string_view s) {
  if (s == "*C" || s == "C") return Property::star_C;
  if (s == "*2C" || s == "2C") return Property::star_2C;
  if (s == "*3C" || s == "3C") return Property::star_3C;
  return std::nullopt;
}

std::string to_string(Provenance p) {
  return p == Provenance::closed_form ? "closed-form" : "blockwise";
}

std::optional<double> power_exponent_of(const std::string& id) {
  if (id == "cesaro") return 0.0;
  if (id.rfind("Mp:", 0) != 0) return std::nullopt;
  std::string_view rest(id);
  rest.remove_prefix(3);
  double p = 0.0;
  auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), p);
  if (ec != std::errc{} || ptr != rest.data() + rest.size()) return std::nullopt;
  return p;
}

namespace {

AnalyticVerdict make(Status s, std::string why) { return {s, std::move(why)}; }

Status status_of(bool b) { return b ? Status::holds : Status::fails; }

std::optional<AnalyticVerdict> same_matrix(Property prop) {
  if (prop == Property::star_3C) return make(Status::fails, "C = I has row abs sums 1");
  return make(Status::holds, "C = I");
}

/// Pairs (id, B): C = B.
std::optional<AnalyticVerdict> identity_source(const std::string& b, Property prop) {
  if (auto q = power_exponent_of(b)) {
    switch (prop) {
      case Property::star_C:
        return make(Status::holds, "C = M_q is a probability matrix, row abs sums 1");
      case Property::star_2C:
        return make(status_of(*q >= -1.0),
                    "column 0 of M_q is 1/S(n,q), which tends to 0 iff S(n,q) diverges iff q >= -1");
      case Property::star_3C:
        return make(Status::fails, "row abs sums of M_q equal 1");
    }
  }
  if (b == "Mexp" || b == "Mf:be" || b == "counterexample") {
    switch (prop) {
      case Property::star_C:
        return make(Status::holds, "C = B is a probability matrix, row abs sums 1");
      case Property::star_2C:
        return make(Status::holds, "each column of B is w(k)/S(n) with S(n) divergent, or 1/(m+1)");
      case Property::star_3C:
        return make(Status::fails, "row abs sums of a probability matrix equal 1");
    }
  }
  if (b == "delta") {
    if (prop == Property::star_3C) return make(Status::fails, "row abs sums of delta equal 2");
    return make(Status::holds, "row abs sums at most 2, each column is eventually 0");
  }
  if (b == "delta-inv") {
    return make(Status::fails, "row n of delta-inv has abs sum n+1");
  }
  return std::nullopt;
}

/// Pairs (A, id): C = A^{-1}.
std::optional<AnalyticVerdict> identity_target(const std::string& a, Property prop) {
  if (auto p = power_exponent_of(a)) {
    (void)p;
    return make(Status::fails,
                "row abs sums of the inverse are 1 + 2 S(n-1,p)/n^p, which is unbounded for every p");
  }
  if (a == "Mexp") {
    switch (prop) {
      case Property::star_C:
        return make(Status::holds,
                    "row abs sums 1 + 2 sum_{j=1}^{n-1} e^{-j} stay below (e+1)/(e-1) < 1+e");
      case Property::star_2C:
        return make(Status::holds, "the inverse is bidiagonal, so each column is eventually 0");
      case Property::star_3C:
        return make(Status::fails, "row abs sums are at least 1");
    }
  }
  if (a == "Mf:be") {
    return make(Status::fails,
                "row abs sums 1 + 2 S(n-1,f)/f(n) grow like sqrt(n) for this weight");
  }
  if (a == "delta") return make(Status::fails, "C = delta-inv has row abs sums n+1");
  if (a == "delta-inv") {
    if (prop == Property::star_3C) return make(Status::fails, "C = delta has row abs sums 2");
    return make(Status::holds, "C = delta: row abs sums at most 2, columns eventually 0");
  }
  return std::nullopt;
}

std::optional<AnalyticVerdict> power_pair(double p, double q, Property prop) {
  bool star_c = q <= p || (-1.0 < p && p < q);
  std::string c_why =
      star_c ? (q <= p ? "q <= p: the transfer has nonnegative entries and row sums 1"
                       : "-1 < p < q: row abs sums 2 n^{q-p} S(n,p)/S(n,q) - 1 converge to 2(q+1)/(p+1) - 1")
             : (p <= -1.0 && -1.0 < q
                    ? "p <= -1 < q: row abs sums grow like n^{q+1}/log n factors (log n when p = -1)"
                    : "p < q <= -1: row abs sums grow like n^{q-p} or n^{-(p+1)}");
  switch (prop) {
    case Property::star_C:
      return make(status_of(star_c), c_why);
    case Property::star_2C: {
      bool cols = q >= -1.0 || p == q;
      if (!star_c) return make(Status::fails, "(*C) fails; " + c_why);
      return make(status_of(cols),
                  cols ? "columns are S(i,p)-multiples of 1/S(n,q) with S(n,q) divergent (or C = I)"
                       : "q < -1: S(n,q) converges, so columns have nonzero limits");
    }
    case Property::star_3C:
      return make(Status::fails, "the transfer maps the constant sequence 1 to itself");
  }
  return std::nullopt;
}

}  // namespace

std::optional<AnalyticVerdict> analytic_pair_verdict(const std::string& a, const std::string& b,
                                                     Property prop) {
  auto pa = power_exponent_of(a);
  auto pb = power_exponent_of(b);
  if (a == b || (pa && pb && *pa == *pb)) return same_matrix(prop);
  if (a == "id") return identity_source(b, prop);
  if (b == "id") return identity_target(a, prop);
  if (pa && pb) return power_pair(*pa, *pb, prop);
  if (pa && *pa == 0.0 && b == "Mp:-1*delta") {
    return make(Status::holds,
                "closed-form transfer has row abs sums (3 - 4/n)/S(n,-1) for n >= 2, which tend to 0");
  }
  if (a == "Mf:be" && pb && *pb == 0.0) {
    if (prop == Property::star_3C) {
      return make(Status::fails, "the transfer has nonnegative entries and row sums 1");
    }
    return make(Status::holds,
                "nonnegative entries with row sums 1 (f increasing); columns carry the factor 1/n");
  }
  return std::nullopt;
}

std::optional<AnalyticVerdict> analytic_first_column_vanishes(const std::string& id) {
  if (id == "id") return make(Status::holds, "first column is (1, 0, 0, ...)");
  if (auto p = power_exponent_of(id)) {
    return make(status_of(*p >= -1.0), "first column is 1/S(n,p), vanishing iff p >= -1");
  }
  if (id == "Mexp") return make(Status::holds, "first column is e/S(n,exp)");
  if (id == "Mf:be") return make(Status::holds, "first column is f(1)/S(n,f) with S(n,f) divergent");
  if (id == "counterexample") return make(Status::holds, "first column is 1/(floor(n/2)+1)");
  if (id == "delta") return make(Status::holds, "first column is (1, -1, 0, 0, ...)");
  if (id == "delta-inv") return make(Status::fails, "first column is constantly 1");
  return std::nullopt;
}

PowerPairClassification classify_pair_mp_mq(double p, double q, index_t N,
                                             const EvidenceConfig& cfg) {
  PowerPairClassification c;
  c.p = p;
  c.q = q;
  auto t = transfer(make_power_weighted<double>({p}), make_power_weighted<double>({q}));
  c.numeric_C = check_pair(t, Property::star_C, N, cfg);
  c.numeric_2C = check_pair(t, Property::star_2C, N, cfg);
  c.star_C = c.numeric_C.status;
  c.star_2C = c.numeric_2C.status;
  c.rationale = c.numeric_C.rationale + "; " + c.numeric_2C.rationale;
  return c;
}

PropertySet compose_verdicts(const PropertySet& ab, const PropertySet& bd) {
  if (ab.b_id != bd.a_id) {
    throw DomainError("composition needs a chain (A,B),(B,D); got (" + ab.a_id + "," + ab.b_id +
                      ") and (" + bd.a_id + "," + bd.b_id + ")");
  }
  auto closure = [](PropertySet s) {
    if (s.star_3C == Status::holds) s.star_2C = Status::holds;
    if (s.star_2C == Status::holds) s.star_C = Status::holds;
    return s;
  };
  PropertySet x = closure(ab), y = closure(bd);
  auto h = [](Status s) { return s == Status::holds; };
  PropertySet out{ab.a_id, bd.b_id, Status::inconclusive, Status::inconclusive,
                  Status::inconclusive};
  if (h(x.star_C) && h(y.star_C)) out.star_C = Status::holds;
  if (h(x.star_2C) && h(y.star_2C)) out.star_2C = Status::holds;
  if ((h(x.star_C) && h(y.star_3C)) || (h(x.star_3C) && h(y.star_2C))) {
    out.star_3C = Status::holds;
  }
  return closure(out);
}

nlohmann::json to_json(const PropertyVerdict& v) {
  nlohmann::json cols = nlohmann::json::array();
  std::vector<index_t> checked;
  for (const auto& [k, e] : v.columns) {
    checked.push_back(k);
    cols.push_back({{"column", k}, {"evidence", to_json(e)}});
  }
  return nlohmann::json{
      {"pair", {{"A", v.a_id}, {"B", v.b_id}}},
      {"property", to_string(v.property)},
      {"status", to_string(v.status)},
      {"sup", v.rows.sup},
      {"growth_exponent", v.rows.slope},
      {"probe_depth", v.probe_depth},
      {"tol", v.tol},
      {"witness_rows", v.rows.witness_rows},
      {"provenance", v.provenance},
      {"analytic", v.analytic ? nlohmann::json(to_string(*v.analytic)) : nlohmann::json(nullptr)},
      {"rationale", v.rationale},
      {"numeric", to_string(v.numeric)},
      {"row_evidence", to_json(v.rows)},
      {"columns_checked", checked},
      {"columns", cols},
  };
}

nlohmann::json to_json(const SubCheck& s) {
  return nlohmann::json{
      {"description", s.description}, {"status", to_string(s.status)}, {"evidence", s.evidence}};
}

nlohmann::json to_json(const CompositeVerdict& v) {
  nlohmann::json subs = nlohmann::json::array();
  for (const auto& s : v.sub_checks) subs.push_back(to_json(s));
  return nlohmann::json{{"check", v.name},
                        {"pair", {{"A", v.a_id}, {"B", v.b_id}}},
                        {"status", to_string(v.status)},
                        {"sub_checks", subs}};
}

}  // namespace summat
