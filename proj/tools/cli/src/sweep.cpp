#include "painleve/cli/sweep.hpp"

#include <charconv>
#include <string_view>

#include "painleve/errors.hpp"
#include "painleve/parallel.hpp"

namespace painleve::cli {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double to_double(std::string_view s) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError("not a finite number: '" + std::string(s) + "'");
  }
  return v;
}

std::size_t to_count(std::string_view s) {
  std::size_t n = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
  if (ec != std::errc{} || end != s.data() + s.size() || n == 0) {
    throw ConfigError("count must be a positive integer: '" + std::string(s) + "'");
  }
  return n;
}

bool is_initial_axis(const std::string& name) {
  return name == "theta0" || name == "thetadot0" || name == "slip0" || name == "x0";
}

}  // namespace

std::vector<double> parse_values(const std::string& spec, std::mt19937_64& rng) {
  if (spec.empty()) throw ConfigError("empty value list");
  const auto fields = split(spec, ':');
  std::vector<double> values;
  if (fields.size() == 4 && fields[0] == "random") {
    const double lo = to_double(fields[1]);
    const double hi = to_double(fields[2]);
    if (!(hi > lo)) throw ConfigError("random range needs lo < hi");
    std::uniform_real_distribution<double> dist(lo, hi);
    values.resize(to_count(fields[3]));
    for (double& v : values) v = dist(rng);
  } else if (fields.size() == 3) {
    const double start = to_double(fields[0]);
    const double stop = to_double(fields[1]);
    const std::size_t n = to_count(fields[2]);
    values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      values[i] = n == 1 ? start : start + (stop - start) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
  } else if (fields.size() == 1) {
    for (auto item : split(spec, ',')) values.push_back(to_double(item));
  } else {
    throw ConfigError("cannot parse value list '" + spec + "'");
  }
  return values;
}

Axis parse_axis(const std::string& spec, std::mt19937_64& rng) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("axis must look like name=values, got '" + spec + "'");
  }
  Axis axis{spec.substr(0, eq), {}};
  static const char* const kNames[] = {
      "theta0", "thetadot0", "slip0",   "x0",      "m",          "L",           "A",
      "g",      "mu_s",      "mu_d",    "epsilon", "mu_cap",     "lambda1",     "alpha1",
      "lambda2", "alpha2",   "gamma",   "sigma_gain", "restitution", "t_max",   "dt"};
  bool known = false;
  for (const char* n : kNames) known = known || axis.name == n;
  if (!known) throw ConfigError("unknown sweep axis '" + axis.name + "'");
  axis.values = parse_values(spec.substr(eq + 1), rng);
  return axis;
}

RunConfig apply_axes(const RunConfig& base, const std::vector<Axis>& axes,
                     const std::vector<double>& point) {
  RunConfig cfg = base;
  auto& p = cfg.params;
  auto& lp = cfg.law;
  const State& s0 = base.initial;
  double theta0 = s0.config.theta;
  double thetadot0 = s0.vel.dtheta;
  double slip0 = friction_residual(s0, base.params);
  double x0 = s0.config.x;
  bool tangent = false;

  for (std::size_t i = 0; i < axes.size(); ++i) {
    const std::string& n = axes[i].name;
    const double v = point[i];
    tangent = tangent || is_initial_axis(n);
    if (n == "theta0") theta0 = v;
    else if (n == "thetadot0") thetadot0 = v;
    else if (n == "slip0") slip0 = v;
    else if (n == "x0") x0 = v;
    else if (n == "m") p.m = v;
    else if (n == "L") p.L = v;
    else if (n == "A") p.A = v;
    else if (n == "g") p.g = v;
    else if (n == "mu_s") p.mu_s = v;
    else if (n == "mu_d") p.mu_d = v;
    else if (n == "epsilon") lp.epsilon = v;
    else if (n == "mu_cap") lp.mu_cap = v;
    else if (n == "lambda1") lp.lambda1 = v;
    else if (n == "alpha1") lp.alpha1 = v;
    else if (n == "lambda2") lp.lambda2 = v;
    else if (n == "alpha2") lp.alpha2 = v;
    else if (n == "gamma") lp.gamma = v;
    else if (n == "sigma_gain") lp.sigma_gain = v;
    else if (n == "restitution") lp.restitution = v;
    else if (n == "t_max") cfg.t_max = v;
    else if (n == "dt") cfg.dt = v;
  }
  if (tangent) {
    cfg.initial = tangent_contact_state(theta0, thetadot0, slip0, p, x0, s0.config.t);
  }
  return cfg;
}

std::vector<SweepRow> run_sweep(const RunConfig& base, const std::vector<Axis>& axes,
                                unsigned threads) {
  std::size_t cells = 1;
  for (const auto& a : axes) {
    if (a.values.empty()) throw ConfigError("sweep axis '" + a.name + "' is empty");
    cells *= a.values.size();
  }

  std::vector<SweepRow> rows(cells);
  std::vector<RunConfig> configs;
  configs.reserve(cells);
  for (std::size_t k = 0; k < cells; ++k) {
    std::vector<double> point(axes.size());
    std::size_t rest = k;
    for (std::size_t i = axes.size(); i-- > 0;) {
      point[i] = axes[i].values[rest % axes[i].values.size()];
      rest /= axes[i].values.size();
    }
    RunConfig cfg = apply_axes(base, axes, point);
    try {
      cfg.validate();
    } catch (const ConfigError& e) {
      throw ConfigError("sweep cell " + std::to_string(k) + ": " + e.what());
    }
    rows[k].point = std::move(point);
    configs.push_back(std::move(cfg));
  }

  parallel_for(cells, threads, [&](std::size_t k) {
    const auto& cfg = configs[k];
    rows[k].summary = summarize(run(cfg.initial, cfg.params, cfg.settings()));
  });
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<Axis>& axes,
                     const std::vector<SweepRow>& rows) {
  for (const auto& a : axes) out << a.name << ',';
  out << "final_mode,status,t_final,energy_loss,detached,events\n";
  for (const auto& row : rows) {
    for (double v : row.point) out << format_double(v) << ',';
    const auto& s = row.summary;
    out << s.final_mode << ',' << s.status << ',' << format_double(s.t_final) << ','
        << format_double(s.energy_loss) << ',' << (s.detached ? "true" : "false") << ','
        << s.events << '\n';
  }
}

}  // namespace painleve::cli
