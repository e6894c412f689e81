#pragma once

#include "schema.hpp"

#include <optional>
#include <string>
#include <vector>

namespace varleb::cli {

inline constexpr const char* kReportSchema = "varleb-report/1";

/// Command-line knobs that override config keys.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> resolution;
  std::optional<int> cubeDepth;
  std::optional<double> tol;

  json apply(json config) const;
};

struct RunOutcome {
  json report;
  int exitCode = 0;  // 0 ok, 2 mathematical assertion violated
  std::string summary;
};

/// Validates `config` against the command's schema (SchemaError before any computation),
/// runs it and assembles the report.
RunOutcome runCommand(const json& config, const Overrides& overrides = {});

struct ReplayOutcome {
  RunOutcome run;
  bool match = false;
  std::vector<std::string> notes;
};

/// Re-runs a report from its config echo and compares the results. With unchanged config
/// the results must be identical; a changed resolution on norm/modular must stay within the
/// recorded convergence envelope.
ReplayOutcome replayReport(const json& report, const Overrides& overrides = {});

/// The report without wall time, for determinism comparisons.
json reportBody(json report);

std::vector<std::string> commandNames();

}  // namespace varleb::cli
