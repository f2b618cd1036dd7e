// Acceptance suite: one PASS/FAIL line per criterion.
//
//   painleve_acceptance [--allow-fail N]... [--cli PATH] [--work-dir DIR]
//
// Exits 0 when every failing criterion is listed with --allow-fail. Criterion
// 8 drives the command-line binary given by --cli and is reported as FAIL
// when no binary is given.

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "painleve/classical.hpp"
#include "painleve/errors.hpp"
#include "painleve/geometry.hpp"
#include "painleve/impact.hpp"
#include "painleve/simulator.hpp"
#include "support.hpp"

namespace {

namespace fs = std::filesystem;
using namespace painleve;
using painleve::testing::Gen;
using std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Report {
 public:
  void check(bool ok, const std::string& what) {
    pass_ = pass_ && ok;
    notes_.emplace_back(ok, what);
  }
  // A failing criterion marks each failed sub-check with "[x]".
  Outcome done() const {
    std::ostringstream s;
    for (std::size_t i = 0; i < notes_.size(); ++i) {
      s << (i ? "; " : "") << (pass_ || notes_[i].first ? "" : "[x] ") << notes_[i].second;
    }
    return {pass_, s.str()};
  }

 private:
  bool pass_ = true;
  std::vector<std::pair<bool, std::string>> notes_;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

double dist(const VerticalVector& a, const VerticalVector& b) {
  return std::max({std::abs(a.dx - b.dx), std::abs(a.dy - b.dy), std::abs(a.dtheta - b.dtheta)});
}

double dist(const VerticalVector& a, const Eigen::Vector3d& b) {
  return (painleve::testing::vec(a) - b).cwiseAbs().maxCoeff();
}

Outcome orthonormality() {
  Gen gen(1001);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Params p = gen.params();
    const double th = gen.theta();
    const auto ks = k_S(th, p);
    const auto kb = k_B(th, p);
    worst = std::max({worst, std::abs(inner(p, ks, ks) - 1.0), std::abs(inner(p, kb, kb) - 1.0),
                      std::abs(inner(p, ks, kb))});
  }
  Report r;
  r.check(worst <= 1e-12, "1000 draws, max deviation " + sci(worst));
  return r.done();
}

Outcome decomposition() {
  using painleve::testing::b_basis;
  using painleve::testing::project;
  using painleve::testing::tangent_basis;
  Gen gen(1002);
  double recon = 0.0, pyth = 0.0, idem = 0.0, oracle = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Params p = gen.params();
    const State s = gen.contact_state(p);
    const auto d = decompose(s, p);
    recon = std::max(recon, dist(d.par_B + d.perp_B + d.perp_S, s.vel));
    const double total = inner(p, s.vel, s.vel);
    const double parts =
        inner(p, d.par_B, d.par_B) + inner(p, d.perp_B, d.perp_B) + inner(p, d.perp_S, d.perp_S);
    pyth = std::max(pyth, std::abs(total - parts) / std::max(1.0, total));
    // Each piece decomposes to itself in its own slot and to zero elsewhere.
    const VerticalVector pieces[] = {d.par_B, d.perp_B, d.perp_S};
    for (int k = 0; k < 3; ++k) {
      State again = s;
      again.vel = pieces[k];
      const auto d2 = decompose(again, p);
      const VerticalVector got[] = {d2.par_B, d2.perp_B, d2.perp_S};
      for (int j = 0; j < 3; ++j) {
        idem = std::max(idem, dist(got[j], j == k ? pieces[k] : VerticalVector{}));
      }
    }
    const double th = s.config.theta;
    const Eigen::Vector3d v = painleve::testing::vec(s.vel);
    const Eigen::Vector3d par_s = project(tangent_basis(th, p), v, p);
    const Eigen::Vector3d par_b = project(b_basis(th, p), v, p);
    oracle = std::max({oracle, dist(d.par_B, par_b), dist(d.perp_B, par_s - par_b),
                       dist(d.perp_S, v - par_s)});
  }
  Report r;
  r.check(recon <= 1e-9, "reconstruction " + sci(recon));
  r.check(pyth <= 1e-9, "Pythagoras " + sci(pyth));
  r.check(idem <= 1e-9, "idempotence " + sci(idem));
  r.check(oracle <= 1e-9, "projection oracle " + sci(oracle));
  return r.done();
}

Outcome tangent_data() {
  Gen gen(1003);
  double perp = 0.0, factor = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Params p = gen.params();
    const double th = gen.theta();
    const double thd = gen.uniform(-3, 3);
    const double slip = gen.uniform(-3, 3);
    const State s = tangent_contact_state(th, thd, slip, p);
    const auto d = decompose(s, p);
    perp = std::max({perp, std::abs(d.n_S), metric_norm(p, d.perp_S)});
    const double c = std::cos(th);
    const double D = p.m * p.L * p.L * c * c + p.A;
    const double ip = p.m * p.L * p.L + p.A;
    const double expected = std::sqrt(p.m * D / ip) * (s.vel.dx - p.L * thd * std::sin(th));
    factor = std::max(factor, std::abs(d.n_B - expected) / std::max(1.0, std::abs(expected)));
  }
  Report r;
  r.check(perp <= 1e-10, "perp_S " + sci(perp));
  r.check(factor <= 1e-10, "n_B factor " + sci(factor));
  return r.done();
}

LawParams random_law_params(Gen& gen, SignConvention conv) {
  LawParams lp;
  lp.epsilon = gen.uniform(0.05, 0.95);
  lp.mu_cap = gen.log_uniform(0.05, 5.0);
  lp.lambda1 = gen.log_uniform(0.1, 5.0);
  lp.alpha1 = gen.log_uniform(0.1, 5.0);
  lp.lambda2 = gen.log_uniform(0.1, 5.0);
  lp.alpha2 = gen.log_uniform(0.1, 5.0);
  lp.gamma = gen.uniform(0.05, 0.95);
  lp.sigma_gain = gen.uniform(0.1, 2.0);
  lp.restitution = gen.uniform(0.0, 1.0);
  lp.sign_convention = conv;
  return lp;
}

Outcome determinism_theorem() {
  Report r;
  const std::pair<LawFamily, const char*> families[] = {{LawFamily::Rebound, "rebound"},
                                                        {LawFamily::Stop, "stop"},
                                                        {LawFamily::MaxBraking, "max_braking"},
                                                        {LawFamily::Detach, "detach"}};
  const std::pair<SignConvention, const char*> conventions[] = {
      {SignConvention::Pushed, "pushed"}, {SignConvention::NbPositive, "nb_positive"}};
  std::uint64_t seed = 1004;
  for (const auto& [family, fname] : families) {
    for (const auto& [conv, cname] : conventions) {
      Gen gen(seed++);
      int tested = 0, failures = 0, draws = 0;
      std::string first_failure;
      while (tested < 10000 && draws < 1000000) {
        ++draws;
        const Params p = gen.params();
        const ConstitutiveLaw law(family, random_law_params(gen, conv));
        const State s = draws % 2 ? gen.tangent_state(p) : gen.contact_state(p);
        if (!classify(s, p, law.params()).is_impact()) continue;
        ++tested;
        try {
          const auto a = apply(law, s, p);
          const auto b = apply(law, s, p);
          const bool ok = a.p_R == b.p_R && is_outgoing(a.p_R, p, law.params()) &&
                          !classify(a.p_R, p, law.params()).is_impact();
          if (!ok) ++failures;
        } catch (const Error& e) {
          if (first_failure.empty()) first_failure = e.what();
          ++failures;
        }
      }
      std::string note = std::string(fname) + "/" + cname + " " + std::to_string(failures) + "/" +
                         std::to_string(tested);
      if (!first_failure.empty()) note += " (" + first_failure + ")";
      r.check(tested == 10000 && failures == 0, note);
    }
  }
  return r.done();
}

Outcome energy_identity() {
  Gen gen(1005);
  double worst = 0.0, worst_slip = 0.0;
  int tested = 0;
  while (tested < 1000) {
    const Params p = gen.params();
    LawParams lp;
    lp.epsilon = gen.uniform(0.05, 0.95);
    const State s = gen.tangent_state(p);
    if (classify(s, p, lp).tag != ImpactTag::TangentImpactB) continue;
    ++tested;
    const double nb = decompose(s, p).n_B;
    const auto out = apply(ConstitutiveLaw(LawFamily::Rebound, lp), s, p);
    const double expected = -0.5 * (1.0 - lp.epsilon * lp.epsilon) * nb * nb;
    worst = std::max(worst, std::abs(out.energy_delta - expected) / std::max(1.0, nb * nb));
    const auto stop = apply(ConstitutiveLaw(LawFamily::Stop, lp), s, p);
    worst_slip = std::max(worst_slip, std::abs(friction_residual(stop.p_R, p)));
  }
  Report r;
  r.check(worst <= 1e-10, "1000 rebounds, energy identity " + sci(worst));
  r.check(worst_slip == 0.0, "stop slip_R max " + sci(worst_slip));
  return r.done();
}

Outcome classical_paradox() {
  Report r;
  const Params rod = Params::uniform_rod(1.0, 1.0, 10.0);
  const double lib = critical_mu(rod, 1);
  const double oracle = painleve::testing::grid_critical_mu(rod);
  r.check(std::abs(lib - 4.0 / 3.0) <= 1e-6 && std::abs(oracle - 4.0 / 3.0) <= 1e-6,
          "critical_mu " + std::to_string(lib) + " (oracle " + std::to_string(oracle) + ")");

  Gen gen(1006);
  int mismatches = 0;
  std::vector<ComplementarityPair> found;
  for (int i = 0; i < 100000; ++i) {
    double b = gen.uniform(-5, 5), c = gen.uniform(-20, 20);
    if (i % 10 == 0) b = 0.0;
    const auto res = resolve_contact(b, c);
    const auto expected = painleve::testing::enumerate_lcp(b, c, found);
    bool ok = res.outcome == expected && res.candidates.size() == found.size();
    for (std::size_t k = 0; ok && k < found.size(); ++k) {
      ok = std::abs(res.candidates[k].phi_y - found[k].phi_y) <= 1e-12 * (1 + found[k].phi_y);
    }
    if (!ok) ++mismatches;
  }
  r.check(mismatches == 0, "LCP oracle mismatches " + std::to_string(mismatches) + "/100000");

  Params p = rod;
  p.mu_s = p.mu_d = 2.0;
  auto label = [&](int s, double thd) {
    const auto [b, c] = lcp_coefficients(pi / 4, thd, 2.0, s, p);
    return std::pair{resolve_contact(b, c).outcome, b};
  };
  const auto [lit0, b_lit] = label(-1, 0.0);
  const auto [lit4, b_lit4] = label(-1, 4.0);
  r.check(lit0 == ContactOutcome::NoSolution,
          "s=-1 thetadot=0: " + std::string(to_string(lit0)) + " (b=" + std::to_string(b_lit) +
              ", NoSolution expected)");
  r.check(lit4 == ContactOutcome::Multiple,
          "s=-1 thetadot=4: " + std::string(to_string(lit4)) + " (b=" + std::to_string(b_lit4) +
              ", Multiple expected)");
  const auto [mir0, b_mir] = label(1, 0.0);
  const auto [mir4, b_mir4] = label(1, 4.0);
  r.check(mir0 == ContactOutcome::NoSolution && mir4 == ContactOutcome::Multiple,
          "mirrored s=+1: " + std::string(to_string(mir0)) + "/" + std::string(to_string(mir4)) +
              " (b=" + std::to_string(b_mir) + ")");
  const auto ne = painleve::testing::newton_euler_normal_accel(pi / 4, 0.0, 2.0, -1, p);
  r.check(std::abs(ne.b - b_lit) <= 1e-12,
          "Newton-Euler oracle b(s=-1)=" + std::to_string(ne.b));
  return r.done();
}

double max_sample_gap(const Trajectory& a, const Trajectory& b) {
  if (a.samples.size() != b.samples.size()) return INFINITY;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    const auto& x = a.samples[i].state;
    const auto& y = b.samples[i].state;
    if (x.config.t != y.config.t || !(a.samples[i].mode == b.samples[i].mode)) return INFINITY;
    worst = std::max({worst, std::abs(x.config.x - y.config.x), std::abs(x.config.y - y.config.y),
                      std::abs(x.config.theta - y.config.theta), dist(x.vel, y.vel)});
  }
  return worst;
}

Outcome hybrid_consistency() {
  Report r;
  {
    const Params p = Params::uniform_rod(1.0, 1.0, 9.81);
    const State pulled = tangent_contact_state(1.55, 0.0, -3.0, p);
    SimulationSettings classical;
    classical.dynamics = DynamicsMode::Classical;
    classical.t_max = 1.0;
    classical.dt = 1e-4;
    SimulationSettings rgims = classical;
    rgims.dynamics = DynamicsMode::Rgims;
    const auto a = run(pulled, p, classical);
    const auto b = run(pulled, p, rgims);
    const double gap = max_sample_gap(a, b);
    r.check(gap <= 1e-6 && a.status == RunStatus::Completed && b.status == RunStatus::Completed &&
                a.events.empty() && b.events.empty(),
            "frictionless pulled sliding over 1 s: max gap " + sci(gap));
  }
  {
    Params p = Params::uniform_rod(1.0, 1.0, 9.81);
    p.mu_s = p.mu_d = 0.3;
    const State pulled = tangent_contact_state(1.55, 0.0, -3.0, p);
    SimulationSettings classical;
    classical.dynamics = DynamicsMode::Classical;
    classical.t_max = 1.0;
    SimulationSettings rgims = classical;
    rgims.dynamics = DynamicsMode::Rgims;
    rgims.smooth_coulomb = true;
    const auto a = run(pulled, p, classical);
    const auto b = run(pulled, p, rgims);
    const double gap = max_sample_gap(a, b);
    r.check(gap <= 1e-6 && a.status == b.status,
            "Coulomb sliding mu=0.3 until " + std::string(to_string(a.status)) + " at t=" +
                std::to_string(a.samples.back().state.config.t) + ": max gap " + sci(gap));
  }
  Params p = Params::uniform_rod(1.0, 1.0, 10.0);
  p.mu_s = p.mu_d = 2.0;
  const State data = tangent_contact_state(pi / 4, 0.0, 1.0, p);
  SimulationSettings classical;
  classical.dynamics = DynamicsMode::Classical;
  classical.t_max = 1.0;
  const auto c = run(data, p, classical);
  r.check(c.status == RunStatus::ParadoxEncountered,
          "classical: " + std::string(to_string(c.status)));
  const std::pair<LawFamily, const char*> laws[] = {{LawFamily::Rebound, "rebound"},
                                                    {LawFamily::Stop, "stop"},
                                                    {LawFamily::MaxBraking, "max_braking"},
                                                    {LawFamily::Detach, "detach"}};
  for (const auto& [family, name] : laws) {
    LawParams lp;
    lp.sigma_gain = 0.5;
    SimulationSettings rgims;
    rgims.law = ConstitutiveLaw(family, lp);
    rgims.t_max = 1.0;
    const auto a = run(data, p, rgims);
    const auto b = run(data, p, rgims);
    const bool finished = a.status == RunStatus::Completed || a.status == RunStatus::RodFlat;
    r.check(finished && max_sample_gap(a, b) == 0.0,
            std::string(name) + ": " + std::string(to_string(a.status)) + " at t=" +
                std::to_string(a.samples.back().state.config.t));
  }
  return r.done();
}

std::string slurp(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char ch : s) out += ch == '\'' ? std::string("'\\''") : std::string(1, ch);
  return out + "'";
}

int shell(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  return rc == -1 ? -1 : WEXITSTATUS(rc);
}

Outcome pipeline_determinism(const std::string& cli, const fs::path& work) {
  Report r;
  if (cli.empty()) {
    r.check(false, "no --cli binary given");
    return r.done();
  }
  fs::remove_all(work);
  fs::create_directories(work);
  const fs::path config = work / "drop.json";
  std::ofstream(config) << R"({
  "schema_version": 1,
  "params": {"m": 1.0, "L": 1.0, "A": 0.3333333333333333, "g": 9.81, "mu_s": 0.5, "mu_d": 0.5},
  "law": {"family": "rebound", "epsilon": 0.4, "restitution": 0.3},
  "initial": {"t": 0, "x": 0, "y": 1.5, "theta": 1.0, "xdot": 0.5, "ydot": 0, "thetadot": 1.0},
  "integration": {"t_max": 1.5, "dt": 1e-4, "dt_out": 1e-3}
}
)";
  for (const char* run_name : {"run1", "run2"}) {
    const fs::path dir = work / run_name;
    const int rc = shell(quote(cli) + " simulate --config " + quote(config.string()) +
                         " --out-dir " + quote(dir.string()) + " > " +
                         quote((dir.string() + ".stdout")) + " 2>/dev/null");
    if (rc != 0) r.check(false, std::string("simulate ") + run_name + " exit " + std::to_string(rc));
  }
  bool identical = true;
  for (const char* file : {"trajectory.csv", "events.jsonl"}) {
    const auto a = slurp(work / "run1" / file);
    identical = identical && !a.empty() && a == slurp(work / "run2" / file);
  }
  identical = identical && slurp(work / "run1.stdout") == slurp(work / "run2.stdout");
  r.check(identical, "simulate twice: outputs byte-identical");

  const std::string axes = " --axis theta0=random:0.3:2.8:4 --axis restitution=0,0.3"
                           " --axis epsilon=0.2,0.8 --axis t_max=0.5 --law rebound --seed 42";
  for (const auto& [threads, dir] : {std::pair{"1", "sweep1"}, std::pair{"4", "sweep4"}}) {
    const int rc = shell(quote(cli) + " sweep --config " + quote(config.string()) + axes +
                         " --threads " + threads + " --out-dir " + quote((work / dir).string()) +
                         " > /dev/null 2>&1");
    if (rc != 0) r.check(false, std::string("sweep threads=") + threads + " exit " + std::to_string(rc));
  }
  const auto s1 = slurp(work / "sweep1" / "sweep.csv");
  const auto s4 = slurp(work / "sweep4" / "sweep.csv");
  const auto rows = std::count(s1.begin(), s1.end(), '\n');
  r.check(!s1.empty() && s1 == s4,
          "sweep threads 1 vs 4: " + std::to_string(rows - 1) + " rows byte-identical");
  return r.done();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"painleve acceptance suite"};
  std::vector<int> allowed;
  std::string cli;
  std::string work = (fs::temp_directory_path() / "painleve_acceptance").string();
  app.add_option("--allow-fail", allowed, "criterion whose failure does not fail the suite");
  app.add_option("--cli", cli, "path of the painleve command-line binary");
  app.add_option("--work-dir", work, "scratch directory for criterion 8");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"geometry orthonormality", orthonormality},
      {"decomposition", decomposition},
      {"tangent initial data", tangent_data},
      {"impact determinism", determinism_theorem},
      {"rebound energy identity", energy_identity},
      {"classical paradox reproduction", classical_paradox},
      {"hybrid consistency", hybrid_consistency},
      {"pipeline determinism", [&] { return pipeline_determinism(cli, work); }},
  };
  const std::set<int> allow(allowed.begin(), allowed.end());
  int blocking = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %d %s: %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first,
                o.detail.c_str(), secs);
    if (!o.pass && !allow.contains(id)) ++blocking;
  }
  std::fflush(stdout);
  return blocking == 0 ? 0 : 1;
}
