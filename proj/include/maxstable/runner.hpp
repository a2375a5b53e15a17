#pragma once

// Executes a parsed experiment and writes its results as JSON or CSV.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "maxstable/config.hpp"
#include "maxstable/report.hpp"

namespace maxstable {

struct MethodResult {
  std::string method;
  std::uint64_t stream = 0;  // child index of the experiment seed
  std::optional<EstimateReport> report;
  std::string error;         // non-empty when the method threw
  bool ok = true;            // false on error, range failure or a failed check
  bool gating = true;        // whether ok feeds the exit code
  double wall_time_ms = 0.0;
};

struct RunOutcome {
  std::vector<MethodResult> results;
  int exit_code() const;
};

// Methods run in order; method k draws from RngStream(seed).child(k).
RunOutcome run_experiment(const ExperimentConfig& c);

void write_json(std::ostream& os, const ExperimentConfig& c, const RunOutcome& r);
void write_csv(std::ostream& os, const ExperimentConfig& c, const RunOutcome& r);

// Runs, writes to c.out (or `out` when empty) in c.format, returns the exit code.
int run(const ExperimentConfig& c, std::ostream& out, std::ostream& err);

// Default methods and window per command, as used when the config leaves them empty.
std::vector<std::string> default_methods(const ExperimentConfig& c);
Window default_window(int dim);

}  // namespace maxstable
