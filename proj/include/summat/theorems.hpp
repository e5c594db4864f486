#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "summat/evidence.hpp"
#include "summat/pair_analysis.hpp"

namespace summat {

enum class OutputFormat { json, csv };

std::string to_string(OutputFormat f);

/// Settings shared by every command.
struct RunConfig {
  /// Depth for pair checks and for operator runs.
  index_t pair_depth = 4096;
  index_t operator_depth = 512;
  double tol = 1e-6;
  Backend scalar = Backend::float64;
  double grid_ratio = 1.3;
  OutputFormat format = OutputFormat::json;
  std::uint64_t seed = 0;

  /// Throws DomainError unless depths >= 16, tol > 0 and ratio > 1.
  void validate() const;
  EvidenceConfig evidence() const;
};

nlohmann::json to_json(const RunConfig& c);

enum class Overall { pass, fail, inconclusive };

std::string to_string(Overall o);

struct TheoremReport {
  std::string theorem_id;
  /// The statement being checked, written as mathematics.
  std::string citation;
  Overall overall = Overall::inconclusive;
  std::vector<SubCheck> sub_checks;
};

/// pass iff every sub-check holds; fail if any fails; otherwise inconclusive.
Overall overall_of(const std::vector<SubCheck>& subs);

nlohmann::json to_json(const TheoremReport& r);

/// All theorem ids in report order (sorted).
std::vector<std::string> theorem_ids();

/// Shell-style glob ('*', '?', '[...]') over a theorem id.
bool glob_match(std::string_view pattern, std::string_view id);

/// Runs every theorem whose id matches the filter. Reports run concurrently and
/// come back sorted by theorem id; an unmatched filter gives an empty list.
std::vector<TheoremReport> run_theorems(std::string_view filter, const RunConfig& cfg);

/// {"schema": 1, "config": ..., "reports": [...]}
nlohmann::json theorems_document(const std::vector<TheoremReport>& reports, const RunConfig& cfg);

}  // namespace summat
