#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gbs/tensor.hpp"

namespace gbs::cli {

enum ExitCode {
  kOk = 0,
  kInternal = 1,
  kConfig = 2,
  kDegenerate = 3,
  kTolerance = 4,
  kBudgetRange = 5,
};

struct SimplexSpec {
  std::string id;
  std::string model;  // ChartedMetric descriptor
  std::vector<Vec> vertices;
};

struct RunConfig {
  std::string command;
  std::string model;  // overrides the model of every simplex when set
  std::string preset;
  std::string vertices_file;
  std::vector<SimplexSpec> simplices;
  std::string chain;  // plain-text chain over simplex ids (budget command)

  int order = 8;
  long mc_samples = 200000;
  int arc_points = 64;
  std::string generators = "adjacent";  // or "geodesic"
  std::uint64_t seed = 1;
  std::optional<double> tol;

  std::string out;  // empty: stdout
  std::string format = "json";

  int trials = 1000;        // oracle
  bool mutate_psi3 = false;  // oracle: flips the normal in Ψ_3 to check the harness
  unsigned threads = 0;
};

struct Preset {
  std::vector<SimplexSpec> simplices;
  std::string chain;
};

// Named vertex sets: flat-2, flat-3, flat-4, flat-chain, regular-h4-side=<L>,
// h2xh2, s2-octant, h2-small, h2-medium, h2-large, h3, 2d-suite.
Preset make_preset(const std::string& name);
std::vector<std::string> preset_names();

// Regular geodesic 4-simplex of side L centred at the origin of the ball.
std::vector<Vec> regular_h4_vertices(double side);
// Equilateral H² triangle whose vertices sit at ball radius `radius`.
std::vector<Vec> h2_equilateral(double radius);

// Merges a JSON config document into cfg; unknown keys are rejected.
void apply_config_json(const nlohmann::json& doc, RunConfig& cfg);
// Vertices: JSON ({"model":..., "vertices":[[...]...]} or {"simplices":[...]})
// or plain text with one vertex per line and blank lines between simplices.
std::vector<SimplexSpec> load_vertices_file(const std::string& path);
// Resolves preset and vertex sources into cfg.simplices.
void resolve_simplices(RunConfig& cfg);

struct CommandResult {
  int exit_code = kOk;
  nlohmann::json report;
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
};

CommandResult cmd_verify(const RunConfig& cfg);
CommandResult cmd_budget(const RunConfig& cfg);
CommandResult cmd_oracle(const RunConfig& cfg);
CommandResult cmd_2d(const RunConfig& cfg);

// Dispatches, maps errors to exit codes and machine-readable error records,
// stamps wall_time, and writes the report atomically.
int run(RunConfig cfg);

std::string render(const CommandResult& r, const std::string& format);
// Writes to a temporary sibling and renames it into place.
void write_atomic(const std::string& path, const std::string& content);
// Report without the wall_time field, for determinism comparisons.
nlohmann::json payload(const nlohmann::json& report);

}  // namespace gbs::cli
