// summat: pair checks, operator runs, the theorem suite and catalog truncations.
//
// Exit codes: 0 pass, 1 fail, 2 usage, 3 inconclusive.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "summat/catalog.hpp"
#include "summat/operator_lab.hpp"
#include "summat/pair_analysis.hpp"
#include "summat/specs.hpp"
#include "summat/theorems.hpp"

using namespace summat;
using nlohmann::json;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;
constexpr int kInconclusive = 3;

int exit_code(Status s) {
  switch (s) {
    case Status::holds:
      return kPass;
    case Status::fails:
      return kFail;
    case Status::inconclusive:
      return kInconclusive;
  }
  return kInconclusive;
}

int exit_code(const std::vector<Status>& parts) { return exit_code(conjunction(parts)); }

Property parse_property(const std::string& s) {
  if (s == "*C" || s == "C") return Property::star_C;
  if (s == "*2C" || s == "2C") return Property::star_2C;
  if (s == "*3C" || s == "3C") return Property::star_3C;
  throw SpecError("unknown property '" + s + "'; expected *C, *2C or *3C");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string analytic_text(const PropertyVerdict& v) {
  return v.analytic ? to_string(*v.analytic) : "";
}

void emit(const json& doc, const RunConfig& cfg, const std::function<void(std::ostream&)>& csv) {
  if (cfg.format == OutputFormat::json) {
    std::cout << doc.dump(2) << '\n';
  } else {
    csv(std::cout);
  }
}

json header(const std::string& command, const RunConfig& cfg) {
  return json{{"schema", 1}, {"command", command}, {"config", to_json(cfg)}};
}

// ---------------------------------------------------------------------------
// pair-check
// ---------------------------------------------------------------------------

struct PairArgs {
  std::string a, b;
  std::string property = "*C";
  bool be = false;
  bool ergodic_transfer = false;
};

template <Field F>
int pair_check(const PairArgs& args, const RunConfig& cfg, const std::string& trace) {
  auto a = parse_matrix<F>(args.a);
  auto b = parse_matrix<F>(args.b);
  const auto ev = cfg.evidence();
  const index_t N = cfg.pair_depth;
  const Property selected = parse_property(args.property);
  auto t = transfer(a, b);
  auto all = check_all(t, N, ev);

  json doc = header("pair-check", cfg);
  doc["a"] = args.a;
  doc["b"] = args.b;
  doc["route"] = t.route;
  doc["selected"] = to_string(selected);
  json verdicts = json::array();
  for (const auto& v : all) verdicts.push_back(to_json(v));
  doc["verdicts"] = verdicts;

  std::vector<Status> decisive{all[static_cast<int>(selected)].status};
  std::optional<CompositeVerdict> be, et;
  if (args.be) {
    be = be_property_check(a, b, N, ev);
    doc["be"] = to_json(*be);
    decisive.push_back(be->status);
  }
  if (args.ergodic_transfer) {
    et = ergodic_transfer_check(a, b, N, ev);
    doc["ergodic_transfer"] = to_json(*et);
    decisive.push_back(et->status);
  }

  if (!trace.empty()) {
    std::ofstream out(trace);
    if (!out) throw SpecError("cannot write trace file '" + trace + "'");
    out << "n,row_abs_sum\n";
    for (index_t n : probe_grid(N, cfg.grid_ratio)) {
      out << n << ',' << format_double(row_abs_sum_double(t.C, n)) << '\n';
    }
  }

  emit(doc, cfg, [&](std::ostream& os) {
    os << "check,status,numeric,analytic,sup,last,growth_exponent\n";
    for (const auto& v : all) {
      os << to_string(v.property) << ',' << to_string(v.status) << ',' << to_string(v.numeric)
         << ',' << analytic_text(v) << ',' << format_double(v.rows.sup) << ','
         << format_double(v.rows.last) << ',' << format_double(v.rows.slope) << '\n';
    }
    if (be) os << "BE," << to_string(be->status) << ",,,,,\n";
    if (et) os << "ergodic-transfer," << to_string(et->status) << ",,,,,\n";
  });
  return exit_code(decisive);
}

// ---------------------------------------------------------------------------
// operator-run
// ---------------------------------------------------------------------------

struct OperatorArgs {
  std::string a, t;
  std::vector<std::string> probes;
};

template <Field F>
int operator_run(const OperatorArgs& args, const RunConfig& cfg, const std::string& trace) {
  using traits = scalar_traits<F>;
  auto a = parse_matrix<F>(args.a);
  auto t = parse_operator<F>(args.t);
  std::vector<std::vector<F>> probes;
  for (const auto& p : args.probes) probes.push_back(parse_probe<F>(p));
  if (probes.empty()) probes.emplace_back(t.dim(), traits::one());
  auto fam = SequenceFamily<F>::power(t);
  auto v = classify(a, fam, probes, cfg.operator_depth, cfg.evidence());

  if (!trace.empty()) {
    std::ofstream out(trace);
    if (!out) throw SpecError("cannot write trace file '" + trace + "'");
    trajectory(a, fam, cfg.operator_depth).write_csv(out);
  }

  json doc = header("operator-run", cfg);
  doc["verdict"] = to_json(v);
  emit(doc, cfg, [&](std::ostream& os) {
    os << "verdict,status,last,slope\n";
    auto row = [&](const char* name, const LabVerdict& lv) {
      os << name << ',' << to_string(lv.status) << ',' << format_double(lv.evidence.last) << ','
         << format_double(lv.evidence.slope) << '\n';
    };
    row("bounded", v.bounded);
    row("ergodic", v.ergodic);
    row("null", v.null);
    row("delta_A_null", v.delta_A_null);
    row("A_delta_null", v.A_delta_null);
    row("limit_T_invariant", v.limit_T_invariant);
    row("limit_T_invariant_probes", v.limit_T_invariant_probes);
    row("first_column", v.first_column);
  });
  return exit_code(v.ergodic.status);
}

// ---------------------------------------------------------------------------
// catalog
// ---------------------------------------------------------------------------

template <Field F>
int catalog(const std::string& spec, index_t rows, const RunConfig& cfg) {
  json doc = header("catalog", cfg);
  if (spec.empty()) {
    doc["matrices"] = catalog_names();
    emit(doc, cfg, [&](std::ostream& os) {
      os << "name\n";
      for (const auto& n : catalog_names()) os << n << '\n';
    });
    return kPass;
  }
  auto m = parse_matrix<F>(spec);
  auto block = truncate(m, rows);
  json entries = json::array();
  for (index_t i = 0; i < rows; ++i) {
    json row = json::array();
    for (index_t j = 0; j < rows; ++j) {
      if constexpr (scalar_traits<F>::exact) {
        row.push_back(scalar_traits<F>::to_string(block(i, j)));
      } else {
        row.push_back(block(i, j));
      }
    }
    entries.push_back(row);
  }
  doc["matrix"] = m.id();
  doc["rows"] = rows;
  doc["entries"] = entries;
  emit(doc, cfg, [&](std::ostream& os) {
    for (index_t i = 0; i < rows; ++i) {
      for (index_t j = 0; j < rows; ++j) {
        if (j) os << ',';
        if constexpr (scalar_traits<F>::exact) {
          os << scalar_traits<F>::to_string(block(i, j));
        } else {
          os << format_double(block(i, j));
        }
      }
      os << '\n';
    }
  });
  return kPass;
}

// ---------------------------------------------------------------------------
// theorems
// ---------------------------------------------------------------------------

int theorems(const std::string& filter, const RunConfig& cfg) {
  auto reports = run_theorems(filter, cfg);
  emit(theorems_document(reports, cfg), cfg, [&](std::ostream& os) {
    os << "theorem_id,sub_check,status,description\n";
    for (const auto& r : reports) {
      os << r.theorem_id << ",overall," << to_string(r.overall) << ','
         << csv_field(r.citation) << '\n';
      for (std::size_t i = 0; i < r.sub_checks.size(); ++i) {
        const auto& s = r.sub_checks[i];
        os << r.theorem_id << ',' << i << ',' << to_string(s.status) << ','
           << csv_field(s.description) << '\n';
      }
    }
  });
  bool undecided = false;
  for (const auto& r : reports) {
    if (r.overall == Overall::fail) return kFail;
    if (r.overall == Overall::inconclusive) undecided = true;
  }
  return undecided ? kInconclusive : kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Summability matrices and operator means: checks and reports"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  if (const char* env = std::getenv("SUMMAT_DEPTH")) {
    try {
      cfg.pair_depth = cfg.operator_depth = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "summat: SUMMAT_DEPTH must be a positive integer\n";
      return kUsage;
    }
  }
  std::optional<index_t> depth;
  std::string scalar = "float", format = "json", trace;
  app.add_option("--depth", depth, "Depth N for pair checks and operator runs");
  app.add_option("--tol", cfg.tol, "Vanishing tolerance");
  app.add_option("--grid-ratio", cfg.grid_ratio, "Ratio of the geometric probe grid");
  app.add_option("--scalar", scalar, "Scalar backend")->check(CLI::IsMember({"exact", "float"}));
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", cfg.seed, "Seed for random operators and searches");
  app.add_option("--trace", trace, "Write a CSV trace to this file");

  PairArgs pargs;
  auto* pair_cmd = app.add_subcommand("pair-check", "Transfer conditions for a pair (A, B)");
  pair_cmd->add_option("A", pargs.a, "Matrix spec")->required();
  pair_cmd->add_option("B", pargs.b, "Matrix spec")->required();
  pair_cmd->add_option("--property", pargs.property, "Condition deciding the exit code")
      ->check(CLI::IsMember({"*C", "*2C", "*3C", "C", "2C", "3C"}));
  pair_cmd->add_flag("--be", pargs.be, "Also check the (BE)-property conditions");
  pair_cmd->add_flag("--ergodic-transfer", pargs.ergodic_transfer,
                     "Also check the ergodic transfer conditions");

  OperatorArgs oargs;
  auto* op_cmd = app.add_subcommand("operator-run", "Classify the A-means of the powers of T");
  op_cmd->add_option("A", oargs.a, "Matrix spec")->required();
  op_cmd->add_option("T", oargs.t, "Operator spec")->required();
  op_cmd->add_option("--probe", oargs.probes, "Probe vector such as 1,0 (repeatable)");

  std::string filter = "*";
  auto* thm_cmd = app.add_subcommand("theorems", "Run the theorem suite");
  thm_cmd->add_option("filter", filter, "Glob over theorem ids");

  std::string cat_spec;
  index_t cat_rows = 8;
  auto* cat_cmd = app.add_subcommand("catalog", "List matrices or print a truncation");
  cat_cmd->add_option("spec", cat_spec, "Matrix spec");
  cat_cmd->add_option("--rows", cat_rows, "Truncation size")->check(CLI::Range(1, 256));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kPass : kUsage;
  }

  try {
    if (depth) cfg.pair_depth = cfg.operator_depth = *depth;
    cfg.scalar = scalar == "exact" ? Backend::exact_rational : Backend::float64;
    cfg.format = format == "csv" ? OutputFormat::csv : OutputFormat::json;
    cfg.validate();
    const bool exact = cfg.scalar == Backend::exact_rational;
    if (*pair_cmd) {
      return exact ? pair_check<Rational>(pargs, cfg, trace) : pair_check<double>(pargs, cfg, trace);
    }
    if (*op_cmd) {
      return exact ? operator_run<Rational>(oargs, cfg, trace)
                   : operator_run<double>(oargs, cfg, trace);
    }
    if (*thm_cmd) return theorems(filter, cfg);
    if (*cat_cmd) {
      return exact ? catalog<Rational>(cat_spec, cat_rows, cfg)
                   : catalog<double>(cat_spec, cat_rows, cfg);
    }
  } catch (const Error& e) {
    std::cerr << "summat: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
