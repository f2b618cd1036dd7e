#pragma once

// Parameter sweeps over the Cartesian product of axes.
//
// Axis syntax, NAME=VALUES with VALUES one of
//   v1,v2,...                explicit list
//   start:stop:count         count evenly spaced values, endpoints included
//   random:lo:hi:count       uniform draws from the seeded generator
//
// Axis names: theta0, thetadot0, slip0, x0 (tangent initial data), m, L, A,
// g, mu_s, mu_d, epsilon, mu_cap, lambda1, alpha1, lambda2, alpha2, gamma,
// sigma_gain, restitution, t_max, dt.

#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "painleve/cli/config.hpp"
#include "painleve/cli/output.hpp"

namespace painleve::cli {

struct Axis {
  std::string name;
  std::vector<double> values;
};

/// Parses a value list (the part after '='). Throws ConfigError on bad syntax
/// or an empty list.
std::vector<double> parse_values(const std::string& spec, std::mt19937_64& rng);

Axis parse_axis(const std::string& spec, std::mt19937_64& rng);

/// Copy of base with one axis value applied. Initial-data axes rebuild the
/// initial state as a tangent contact state.
RunConfig apply_axes(const RunConfig& base, const std::vector<Axis>& axes,
                     const std::vector<double>& point);

struct SweepRow {
  std::vector<double> point;
  RunSummary summary;
};

/// Runs every cell on up to `threads` threads (0 = hardware concurrency).
/// Rows come back in lexicographic axis order (last axis fastest) whatever the
/// thread count. Throws ConfigError if any cell has an invalid configuration.
std::vector<SweepRow> run_sweep(const RunConfig& base, const std::vector<Axis>& axes,
                                unsigned threads);

void write_sweep_csv(std::ostream& out, const std::vector<Axis>& axes,
                     const std::vector<SweepRow>& rows);

}  // namespace painleve::cli
