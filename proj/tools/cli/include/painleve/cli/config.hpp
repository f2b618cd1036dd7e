#pragma once

// Run configuration file (JSON, versioned by "schema_version").
//
//   {
//     "schema_version": 1,
//     "mode": "rgims" | "classical",
//     "smooth_coulomb": false,
//     "params": {"m", "L", "A", "g", "mu_s", "mu_d"},
//     "law": {"family": "rebound" | "stop" | "max_braking" | "detach",
//             "epsilon", "mu_cap", "lambda1", "alpha1", "lambda2", "alpha2",
//             "gamma", "sigma_gain", "restitution",
//             "sign_convention": "pushed" | "nb_positive", "tol"},
//     "initial": {"t", "x", "y", "theta", "xdot", "ydot", "thetadot"}
//              | {"tangent": true, "t", "x", "theta", "thetadot", "slip"},
//     "integration": {"t_max", "dt", "dt_out"},
//     "output": {"trajectory", "events", "paradox_map", "sweep"}
//   }
//
// Every section except "schema_version" is optional and falls back to the
// defaults of RunConfig. Unknown keys are rejected.

#include <filesystem>
#include <stdexcept>
#include <string>

#include "painleve/geometry.hpp"
#include "painleve/impact.hpp"
#include "painleve/simulator.hpp"

namespace painleve::cli {

inline constexpr int kSchemaVersion = 1;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OutputPaths {
  std::string trajectory = "trajectory.csv";
  std::string events = "events.jsonl";
  std::string paradox_map = "paradox_map.csv";
  std::string sweep = "sweep.csv";

  friend bool operator==(const OutputPaths&, const OutputPaths&) = default;
};

struct RunConfig {
  DynamicsMode mode = DynamicsMode::Rgims;
  bool smooth_coulomb = false;
  Params params = Params::uniform_rod(1.0, 1.0);
  LawFamily law_family = LawFamily::Stop;
  LawParams law;
  State initial{{0.0, 0.0, 1.0, 1.5707963267948966}, {}};
  double t_max = 1.0;
  double dt = 1e-4;
  double dt_out = 1e-2;
  OutputPaths output;

  /// Throws ConfigError if any range is violated.
  void validate() const;

  [[nodiscard]] ConstitutiveLaw make_law() const;
  [[nodiscard]] SimulationSettings settings() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

DynamicsMode parse_mode(const std::string& s);
LawFamily parse_law_family(const std::string& s);
SignConvention parse_sign_convention(const std::string& s);
std::string_view to_string(DynamicsMode m);

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
std::string dump_config(const RunConfig& cfg);

}  // namespace painleve::cli
