#pragma once

// Experiment configuration: a flat "key = value" text format with one
// [model.NAME] table per model. See README for the schema.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "maxstable/lattice.hpp"
#include "maxstable/model.hpp"

namespace maxstable {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, std::string field, std::string reason);
  int line() const { return line_; }
  const std::string& field() const { return field_; }
  const std::string& reason() const { return reason_; }

 private:
  int line_;
  std::string field_;
  std::string reason_;
};

enum class Command { theta, verify, fidi, bound, probe, sweep };
enum class OutputFormat { json, csv };

const char* to_string(Command c);
Command parse_command(const std::string& s);
const char* to_string(OutputFormat f);
OutputFormat parse_format(const std::string& s);

struct ModelTable {
  std::map<std::string, std::string> fields;
  std::map<std::string, int> lines;  // where each field was set (not compared)

  bool operator==(const ModelTable& o) const { return fields == o.fields; }
};

struct ExperimentConfig {
  Command command = Command::theta;
  std::optional<std::uint64_t> seed;
  std::size_t replicates = 10'000;
  std::optional<Window> window;
  std::vector<std::string> methods;
  std::string out;
  OutputFormat format = OutputFormat::json;
  LatticeOrder order = LatticeOrder::lexicographic;
  unsigned workers = 0;

  std::string model;  // selected table; defaults to the only one
  std::map<std::string, ModelTable> models;

  // spectral construction
  std::string construction = "tail";
  std::int64_t margin = -1;
  double tail_fraction = 0.05;

  // pickands / block / sweep / probe
  std::int64_t pickands_n = 50;
  std::vector<std::int64_t> sweep_n;
  double block_n = 1e9;
  std::int64_t block_r = 40;
  double tau = 1.0;
  std::string block_mode = "identity";
  std::vector<std::int64_t> probe_m;

  // fidi
  std::vector<LatticePoint> points;
  std::vector<double> thresholds;
  std::optional<LatticePoint> tilt_point;

  // verify
  std::vector<std::string> identities;
  std::size_t checks = 20;

  bool operator==(const ExperimentConfig& o) const;
};

// Total: returns a validated config or throws ParseError naming line and field.
// `overrides` replace top-level keys (command-line flags) before validation.
ExperimentConfig parse_config(const std::string& text, const std::map<std::string, std::string>& overrides = {});
ExperimentConfig load_config(const std::string& path, const std::map<std::string, std::string>& overrides = {});
std::string serialize_config(const ExperimentConfig& c);

// Builds the selected model; errors carry the line of the offending field.
ModelRef build_model(const ExperimentConfig& c);
ModelRef build_model(const ExperimentConfig& c, const std::string& name);

// "a..b" per coordinate, comma separated: "-30..30" or "0..10,0..10".
Window parse_window(const std::string& s);
std::string format_window(const Window& w);
// Coordinates separated by commas, points by ';': "0;1" or "0,0;1,0".
std::vector<LatticePoint> parse_points(const std::string& s);

}  // namespace maxstable
