#include "painleve/cli/config.hpp"

#include <fstream>
#include <initializer_list>
#include <nlohmann/json.hpp>
#include <sstream>

#include "painleve/errors.hpp"

namespace painleve::cli {

namespace {

using nlohmann::json;

void only_keys(const json& j, const char* section, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError(std::string(section) + " must be an object");
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) throw ConfigError("unknown key '" + key + "' in " + section);
  }
}

void read(const json& j, const char* key, double& out) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  out = v.get<double>();
}

void read(const json& j, const char* key, bool& out) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (!v.is_boolean()) throw ConfigError(std::string("'") + key + "' must be a boolean");
  out = v.get<bool>();
}

void read(const json& j, const char* key, std::string& out) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (!v.is_string()) throw ConfigError(std::string("'") + key + "' must be a string");
  out = v.get<std::string>();
}

void read_params(const json& j, Params& p) {
  only_keys(j, "params", {"m", "L", "A", "g", "mu_s", "mu_d"});
  read(j, "m", p.m);
  read(j, "L", p.L);
  read(j, "A", p.A);
  read(j, "g", p.g);
  read(j, "mu_s", p.mu_s);
  read(j, "mu_d", p.mu_d);
}

void read_law(const json& j, RunConfig& cfg) {
  only_keys(j, "law",
            {"family", "epsilon", "mu_cap", "lambda1", "alpha1", "lambda2", "alpha2", "gamma",
             "sigma_gain", "restitution", "sign_convention", "tol"});
  auto& lp = cfg.law;
  if (j.contains("family")) {
    std::string f;
    read(j, "family", f);
    cfg.law_family = parse_law_family(f);
  }
  read(j, "epsilon", lp.epsilon);
  read(j, "mu_cap", lp.mu_cap);
  read(j, "lambda1", lp.lambda1);
  read(j, "alpha1", lp.alpha1);
  read(j, "lambda2", lp.lambda2);
  read(j, "alpha2", lp.alpha2);
  read(j, "gamma", lp.gamma);
  read(j, "sigma_gain", lp.sigma_gain);
  read(j, "restitution", lp.restitution);
  read(j, "tol", lp.tol);
  if (j.contains("sign_convention")) {
    std::string c;
    read(j, "sign_convention", c);
    lp.sign_convention = parse_sign_convention(c);
  }
}

// Either a full state or a contact state tangent to the line, given by
// (theta, thetadot, slip). The tangent form needs the params already read.
void read_initial(const json& j, RunConfig& cfg) {
  bool tangent = false;
  read(j, "tangent", tangent);
  State& s = cfg.initial;
  if (tangent) {
    only_keys(j, "initial", {"tangent", "t", "x", "theta", "thetadot", "slip"});
    double t = 0.0, x = 0.0, theta = s.config.theta, thetadot = 0.0, slip = 0.0;
    read(j, "t", t);
    read(j, "x", x);
    read(j, "theta", theta);
    read(j, "thetadot", thetadot);
    read(j, "slip", slip);
    if (!std::isfinite(theta) || !in_contact_chart(theta)) {
      throw ConfigError("initial.theta of a tangent state must lie in (0, pi)");
    }
    s = tangent_contact_state(theta, thetadot, slip, cfg.params, x, t);
    return;
  }
  only_keys(j, "initial", {"tangent", "t", "x", "y", "theta", "xdot", "ydot", "thetadot"});
  read(j, "t", s.config.t);
  read(j, "x", s.config.x);
  read(j, "y", s.config.y);
  read(j, "theta", s.config.theta);
  read(j, "xdot", s.vel.dx);
  read(j, "ydot", s.vel.dy);
  read(j, "thetadot", s.vel.dtheta);
}

}  // namespace

DynamicsMode parse_mode(const std::string& s) {
  if (s == "rgims") return DynamicsMode::Rgims;
  if (s == "classical") return DynamicsMode::Classical;
  throw ConfigError("mode must be 'rgims' or 'classical', got '" + s + "'");
}

std::string_view to_string(DynamicsMode m) {
  return m == DynamicsMode::Rgims ? "rgims" : "classical";
}

LawFamily parse_law_family(const std::string& s) {
  for (auto f : {LawFamily::Rebound, LawFamily::Stop, LawFamily::MaxBraking, LawFamily::Detach}) {
    if (s == to_string(f)) return f;
  }
  throw ConfigError("law family must be rebound, stop, max_braking or detach, got '" + s + "'");
}

SignConvention parse_sign_convention(const std::string& s) {
  if (s == "pushed") return SignConvention::Pushed;
  if (s == "nb_positive") return SignConvention::NbPositive;
  throw ConfigError("sign_convention must be 'pushed' or 'nb_positive', got '" + s + "'");
}

void RunConfig::validate() const {
  try {
    params.validate();
    (void)make_law();
    settings().validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  const auto& c = initial.config;
  const auto& v = initial.vel;
  for (double x : {c.t, c.x, c.y, c.theta, v.dx, v.dy, v.dtheta}) {
    if (!std::isfinite(x)) throw ConfigError("initial state must be finite");
  }
  if (!(t_max > c.t)) throw ConfigError("t_max must exceed the initial time");
  for (const auto* path : {&output.trajectory, &output.events, &output.paradox_map, &output.sweep}) {
    if (path->empty()) throw ConfigError("output file names must be non-empty");
  }
}

ConstitutiveLaw RunConfig::make_law() const { return ConstitutiveLaw(law_family, law); }

SimulationSettings RunConfig::settings() const {
  SimulationSettings s;
  s.dynamics = mode;
  s.law = make_law();
  s.smooth_coulomb = smooth_coulomb;
  s.dt = dt;
  s.dt_out = dt_out;
  s.t_max = t_max;
  return s;
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  only_keys(j, "config",
            {"schema_version", "mode", "smooth_coulomb", "params", "law", "initial", "integration",
             "output"});
  if (!j.contains("schema_version") || !j.at("schema_version").is_number_integer()) {
    throw ConfigError("config needs an integer schema_version");
  }
  if (j.at("schema_version").get<int>() != kSchemaVersion) {
    throw ConfigError("unsupported schema_version " + j.at("schema_version").dump() +
                      " (expected " + std::to_string(kSchemaVersion) + ")");
  }

  RunConfig cfg;
  if (j.contains("mode")) {
    std::string m;
    read(j, "mode", m);
    cfg.mode = parse_mode(m);
  }
  read(j, "smooth_coulomb", cfg.smooth_coulomb);
  if (j.contains("params")) read_params(j.at("params"), cfg.params);
  if (j.contains("law")) read_law(j.at("law"), cfg);
  if (j.contains("initial")) read_initial(j.at("initial"), cfg);
  if (j.contains("integration")) {
    const auto& in = j.at("integration");
    only_keys(in, "integration", {"t_max", "dt", "dt_out"});
    read(in, "t_max", cfg.t_max);
    read(in, "dt", cfg.dt);
    read(in, "dt_out", cfg.dt_out);
  }
  if (j.contains("output")) {
    const auto& out = j.at("output");
    only_keys(out, "output", {"trajectory", "events", "paradox_map", "sweep"});
    read(out, "trajectory", cfg.output.trajectory);
    read(out, "events", cfg.output.events);
    read(out, "paradox_map", cfg.output.paradox_map);
    read(out, "sweep", cfg.output.sweep);
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string dump_config(const RunConfig& cfg) {
  const auto& p = cfg.params;
  const auto& lp = cfg.law;
  const auto& s = cfg.initial;
  json j = {
      {"schema_version", kSchemaVersion},
      {"mode", std::string(to_string(cfg.mode))},
      {"smooth_coulomb", cfg.smooth_coulomb},
      {"params", {{"m", p.m}, {"L", p.L}, {"A", p.A}, {"g", p.g}, {"mu_s", p.mu_s}, {"mu_d", p.mu_d}}},
      {"law",
       {{"family", std::string(to_string(cfg.law_family))},
        {"epsilon", lp.epsilon},
        {"mu_cap", lp.mu_cap},
        {"lambda1", lp.lambda1},
        {"alpha1", lp.alpha1},
        {"lambda2", lp.lambda2},
        {"alpha2", lp.alpha2},
        {"gamma", lp.gamma},
        {"sigma_gain", lp.sigma_gain},
        {"restitution", lp.restitution},
        {"sign_convention", std::string(to_string(lp.sign_convention))},
        {"tol", lp.tol}}},
      {"initial",
       {{"t", s.config.t},
        {"x", s.config.x},
        {"y", s.config.y},
        {"theta", s.config.theta},
        {"xdot", s.vel.dx},
        {"ydot", s.vel.dy},
        {"thetadot", s.vel.dtheta}}},
      {"integration", {{"t_max", cfg.t_max}, {"dt", cfg.dt}, {"dt_out", cfg.dt_out}}},
      {"output",
       {{"trajectory", cfg.output.trajectory},
        {"events", cfg.output.events},
        {"paradox_map", cfg.output.paradox_map},
        {"sweep", cfg.output.sweep}}},
  };
  return j.dump(2) + "\n";
}

}  // namespace painleve::cli
