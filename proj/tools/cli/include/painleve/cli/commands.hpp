#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "painleve/cli/config.hpp"

namespace painleve::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 1,
  kExitParadox = 2,
  kExitNotOnContact = 3,
  kExitNonConvergence = 4,
};

/// Flags shared by every subcommand; set values override the config file.
struct CommonOptions {
  std::optional<std::string> config;
  std::optional<std::string> mode;
  std::optional<std::string> law;
  std::optional<double> t_max;
  std::optional<double> dt;
  bool smooth_coulomb = false;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
};

struct ParadoxMapOptions {
  std::string theta = "0.01:3.13:157";
  std::string mu = "0:3:61";
  int slip_sign = 1;
  double thetadot = 0.0;
  unsigned threads = 1;
};

struct SweepOptions {
  std::vector<std::string> axes;
  unsigned threads = 0;
};

/// Loads the config named in opts (or the defaults) and applies overrides.
RunConfig resolve_config(const CommonOptions& opts);

int cmd_simulate(const CommonOptions& opts, std::ostream& out, std::ostream& err);
int cmd_impact(const CommonOptions& opts, std::ostream& out, std::ostream& err);
int cmd_paradox_map(const CommonOptions& opts, const ParadoxMapOptions& map, std::ostream& out,
                    std::ostream& err);
int cmd_sweep(const CommonOptions& opts, const SweepOptions& sweep, std::ostream& out,
              std::ostream& err);

}  // namespace painleve::cli
