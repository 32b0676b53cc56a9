#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "minsul/mesh.hpp"
#include "minsul/model.hpp"
#include "minsul/shooting.hpp"

namespace minsul::cli {

enum class Subcommand { solve, shoot, verify_barriers, sweep, report };
enum class Format { csv, json };

struct MeshSpec {
  std::size_t nodes = 257;
  Grading grading = Grading::graded;
  double exponent = 1.5;
};

struct BarrierSpec {
  /// Explicit delta; otherwise solved from params.j_x_max.
  std::optional<double> delta;
  std::optional<double> alpha;
  std::optional<double> beta;
};

struct SweepSpec {
  /// Defaults: ceiling / steps and the ceiling F(phi_L).
  std::optional<double> j_min;
  std::optional<double> j_max;
  int steps = 10;
};

struct ShootSpec {
  ShootingMode mode = ShootingMode::fixed_current;
  /// Initial a'(0); defaults to a_L.
  std::optional<double> beta;
  /// Initial phi'(0) or j_x depending on the mode; defaults to phi_L or j_x.
  std::optional<double> guess;
  double eta = 1e-4;
};

struct OutputSpec {
  /// "-" writes to standard output.
  std::string path = "-";
  Format format = Format::csv;
};

struct RunConfig {
  Subcommand subcommand = Subcommand::solve;
  DiodeParams params;
  /// Explicit current ceiling; resolve() defaults it to max(F(phi_L), j_x).
  std::optional<double> j_x_max;
  MeshSpec mesh;
  BarrierSpec barriers;
  SweepSpec sweep;
  ShootSpec shoot;
  OutputSpec output;
};

std::string to_string(Subcommand s);
std::optional<Subcommand> parse_subcommand(const std::string& name);

/// Parses the JSON config text. Accepts a bare config object or an artifact that embeds
/// one under "config". Missing keys keep their defaults; unknown keys are rejected.
/// Throws ConfigError.
RunConfig parse_config(const std::string& text, RunConfig base = {});

/// Reads a config file. CSV artifacts are accepted through their "# config=" line.
RunConfig load_config(const std::string& path, RunConfig base = {});

/// Fills derived defaults (j_x_max from phi_L, ...) and checks the invariants.
/// Throws ConfigError.
RunConfig resolve(RunConfig cfg);

/// Compact JSON of a resolved config, stable key order.
std::string config_json(const RunConfig& cfg);

/// Builds a config from argv (CLI11). Flags override values from --config.
/// Returns std::nullopt after printing help.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out);

/// Runs the subcommand, writes the artifact and returns the exit status.
/// Failures print machine-readable error JSON to `err`.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// parse_args + run with error mapping.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace minsul::cli
