// nematic: simulate, compare, verify and certify from the command line.
//
// Exit codes: 0 ok, 1 property failure, 2 invalid input, 3 numerical abort,
// 4 certification failure.

#include <fftw3.h>

#include <Eigen/Core>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nematic/io.hpp"
#include "nematic/verify.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace nematic;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Common {
  std::string config;
  std::string out;
  std::string preset;
  std::string backend;
  int cadence = 0;
  long long seed = -1;
  double zeta = -1.0;
  double cdelta = -1.0;
  std::vector<std::string> sets;
};

void add_common(CLI::App* app, Common& c, bool certify_flags) {
  app->add_option("--config", c.config, "Scenario config file (key = value lines)");
  app->add_option("--out", c.out, "Output directory")->default_val("out");
  app->add_option("--preset", c.preset, "Initial data preset (overrides init.preset)");
  app->add_option("--backend", c.backend, "Spatial backend")
      ->check(CLI::IsMember({"spectral", "central"}));
  app->add_option("--cadence", c.cadence, "Monitor/snapshot cadence in steps")->check(CLI::PositiveNumber);
  app->add_option("--seed", c.seed, "Seed for randomized initial data")->check(CLI::NonNegativeNumber);
  app->add_option("--set", c.sets, "Extra config override key=value (repeatable)");
  if (certify_flags) {
    app->add_option("--zeta", c.zeta, "Absorption parameter in (0, 1)");
    app->add_option("--cdelta", c.cdelta, "Gronwall constant C_delta (default: calibrate)");
  }
}

ScenarioConfig resolve(const Common& c, const std::string& path) {
  ScenarioConfig cfg = path.empty() ? ScenarioConfig::defaults() : load_config(path);
  auto set = [&](const std::string& k, const std::string& v) { apply_setting(cfg, k, v); };
  if (!c.preset.empty()) set("init.preset", c.preset);
  if (!c.backend.empty()) set("solver.backend", c.backend);
  if (c.cadence > 0) set("output.cadence", std::to_string(c.cadence));
  if (c.seed >= 0) set("init.seed", std::to_string(c.seed));
  if (c.zeta >= 0) set("certify.zeta", format_double(c.zeta));
  if (c.cdelta >= 0) set("certify.cdelta", format_double(c.cdelta));
  for (const std::string& kv : c.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ValidationError("--set expects key=value, got '" + kv + "'");
    set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw ValidationError("cannot write '" + p.string() + "'");
  f << text;
}

void write_json(const fs::path& p, const json& j) { write_text(p, j.dump(2) + "\n"); }

fs::path prepare_out(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create output directory '" + dir + "': " + ec.message());
  return dir;
}

json manifest(const std::string& command, const std::vector<std::string>& configs,
              const std::string& out, std::uint64_t seed, const std::string& started) {
  json j;
  j["command"] = command;
  j["config"] = configs;
  j["output"] = out;
  j["seed"] = seed;
  j["versions"]["nematic"] = kVersion;
  j["versions"]["compiler"] = __VERSION__;
  j["versions"]["fftw"] = std::string(fftw_version);
  j["versions"]["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                           "." + std::to_string(EIGEN_MINOR_VERSION);
  j["started"] = started;
  j["finished"] = utc_now();
  return j;
}

json num(double x) { return std::isfinite(x) ? json(x) : json(format_double(x)); }

int cmd_verify(const fs::path* out, std::uint64_t seed, bool fault) {
  VerifyOptions opt;
  opt.seed = seed;
  opt.inject_levi_civita_flip = fault;
  const VerifyReport rep = run_verify(opt);
  std::printf("%-14s %-32s %7s %9s %12s %10s\n", "group", "property", "checks", "failures",
              "max_error", "tolerance");
  json props = json::array();
  for (const PropertyResult& p : rep.properties) {
    std::printf("%-14s %-32s %7d %9d %12.3e %10.1e  %s\n", p.group.c_str(), p.name.c_str(), p.checks,
                p.failures, p.max_error, p.tolerance, p.pass() ? "PASS" : "FAIL");
    props.push_back({{"group", p.group},
                     {"property", p.name},
                     {"checks", p.checks},
                     {"failures", p.failures},
                     {"max_error", p.max_error},
                     {"tolerance", p.tolerance},
                     {"pass", p.pass()}});
  }
  json groups = json::object();
  std::printf("\n");
  for (const auto& [name, g] : rep.groups()) {
    std::printf("%-14s %d/%d properties passed (%d checks)\n", name.c_str(), g.passed, g.properties,
                g.checks);
    groups[name] = {{"properties", g.properties}, {"passed", g.passed}, {"checks", g.checks}};
  }
  for (const std::string& f : rep.failed()) std::printf("FAILED: %s\n", f.c_str());
  std::printf("verdict: %s\n", rep.pass() ? "pass" : "fail");
  if (out) {
    write_json(*out / "verify.json", {{"verdict", rep.pass() ? "pass" : "fail"},
                                       {"fault_injected", fault},
                                       {"groups", groups},
                                       {"properties", props},
                                       {"failed", rep.failed()}});
  }
  return rep.pass() ? 0 : 1;
}

int cmd_simulate(const Common& c) {
  const std::string started = utc_now();
  const ScenarioConfig cfg = resolve(c, c.config);
  const Scenario sc = build_scenario(cfg);
  const fs::path out = prepare_out(c.out);
  const fs::path snaps = out / "snapshots";
  fs::create_directories(snaps);
  int index = 0;
  const Trajectory tr = run(sc, cfg.solver, [&](const SimulationState& s, const MonitorSample&) {
    char name[32];
    std::snprintf(name, sizeof name, "%06d", index++);
    write_snapshot((snaps / (std::string("v_") + name + ".nemf")).string(), make_snapshot("v", s.t, s.v));
    write_snapshot((snaps / (std::string("d_") + name + ".nemf")).string(), make_snapshot("d", s.t, s.d));
  });
  write_monitor_csv((out / "monitor.csv").string(), monitor_rows(tr));
  write_text(out / "config.txt", to_config_text(cfg));
  const EnergyMonitorReport em = energy_monitor(tr.monitor, 1e-8);
  json j = manifest("simulate", {c.config}, c.out, cfg.seed, started);
  j["samples"] = tr.monitor.size();
  j["snapshots"] = index;
  j["cumulative_dissipation"] = tr.cumulative_dissipation;
  j["energy_monitor_max_residual"] = em.max_abs;
  j["energy_inequality_holds"] = em.inequality_holds;
  write_json(out / "manifest.json", j);
  std::printf("simulate: %zu samples, E(0) = %.6e, E(T) = %.6e, wrote %s\n", tr.monitor.size(),
              tr.monitor.front().total, tr.monitor.back().total, (out / "monitor.csv").c_str());
  return 0;
}

ScenarioConfig default_reference(const ScenarioConfig& cand) {
  ScenarioConfig r = cand;
  if (cand.init_preset == "perturbed-twin") r.init_preset = "taylor-green-coupled";
  r.perturbation = 0.0;
  r.defect_mass = 0.0;
  r.oscillation = 0.0;
  return r;
}

int cmd_compare(const Common& c, const std::string& reference) {
  const std::string started = utc_now();
  const ScenarioConfig cand = resolve(c, c.config);
  const ScenarioConfig ref = reference.empty() ? default_reference(cand) : resolve(c, reference);
  const fs::path out = prepare_out(c.out);
  const ComparisonResult res = compare(cand, ref);
  const GronwallReport& g = res.report;
  write_monitor_csv((out / "relative.csv").string(), res.series.rows);
  write_text(out / "candidate.txt", to_config_text(cand));
  write_text(out / "reference.txt", to_config_text(ref));
  json margins = json::array();
  for (std::size_t k = 0; k < g.margin.size(); ++k)
    margins.push_back({{"t", res.series.rows[k].t},
                       {"E", res.series.rows[k].E_rel},
                       {"bound", g.bound[k]},
                       {"margin_pre_gronwall", g.margin_pre[k]},
                       {"margin_bound", g.margin_bound[k]}});
  json rep = {{"verdict", g.pass ? "pass" : "fail"},
              {"first_failure_t", g.first_failure >= 0 ? json(res.series.rows[g.first_failure].t) : json()},
              {"c0", g.c0},
              {"zeta", res.zeta},
              {"minimal_zeta", res.minimal_zeta},
              {"cdelta", res.cdelta},
              {"cdelta_calibrated", res.cdelta_calibrated},
              {"integral_K", g.integral_K},
              {"worst_margin", num(g.worst_margin)},
              {"tolerance", g.tolerance},
              {"max_E", 0.0},
              {"form_gap", res.series.max_form_gap},
              {"sobolev_ratio", res.series.sobolev_ratio},
              {"min_jensen_gap", res.series.min_jensen_gap},
              {"margins", margins}};
  double maxE = 0.0;
  for (const ComparisonRow& r : res.series.rows) maxE = std::max(maxE, r.E_rel);
  rep["max_E"] = maxE;
  if (!g.pass)
    rep["note"] = "a failure may reflect an under-sized C_delta rather than a genuine uniqueness violation";
  write_json(out / "report.json", rep);
  json m = manifest("compare", {c.config, reference}, c.out, cand.seed, started);
  write_json(out / "manifest.json", m);
  std::printf("compare: c0 = %.6e, C_delta = %.6e%s, max E = %.6e, worst margin = %.6e, verdict %s\n",
              g.c0, res.cdelta, res.cdelta_calibrated ? " (calibrated)" : "", maxE, g.worst_margin,
              g.pass ? "pass" : "fail");
  return g.pass ? 0 : 4;
}

int cmd_certify(const std::string& input, double c0, double zeta, const std::string& out_dir) {
  const std::string started = utc_now();
  const std::vector<ComparisonRow> rows = read_monitor_csv(input);
  std::vector<RelativeEnergySample> s;
  for (const ComparisonRow& r : rows) {
    if (!std::isfinite(r.E_rel) || !std::isfinite(r.W_rel) || !std::isfinite(r.K))
      throw ValidationError("'" + input + "' has no relative-energy columns (simulation output?)");
    s.push_back({r.t, r.E_rel, r.W_rel, r.K});
  }
  const GronwallReport g = gronwall_certify(s, c0, zeta);
  if (!out_dir.empty()) {
    const fs::path out = prepare_out(out_dir);
    write_json(out / "certify.json", {{"verdict", g.pass ? "pass" : "fail"},
                                      {"input", input},
                                      {"c0", c0},
                                      {"zeta", zeta},
                                      {"integral_K", g.integral_K},
                                      {"worst_margin", num(g.worst_margin)},
                                      {"first_failure", g.first_failure},
                                      {"started", started}});
  }
  std::printf("certify: %zu samples, int K = %.6e, worst margin = %.6e, verdict %s\n", s.size(),
              g.integral_K, g.worst_margin, g.pass ? "pass" : "fail");
  return g.pass ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ericksen-Leslie nematic flow: simulation and weak-strong certification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  auto* verify = app.add_subcommand("verify", "Run the algebra and identity suite");
  std::string verify_out;
  std::uint64_t verify_seed = 1;
  bool fault = false;
  verify->add_option("--out", verify_out, "Write verify.json into this directory");
  verify->add_option("--seed", verify_seed, "Seed for random inputs");
  verify->add_flag("--inject-levi-civita-fault", fault)->group("");

  Common sim_opts;
  auto* simulate = app.add_subcommand("simulate", "Run one scenario, write snapshots and monitor CSV");
  add_common(simulate, sim_opts, false);

  Common cmp_opts;
  std::string reference;
  auto* cmp = app.add_subcommand("compare", "Weak-strong comparison of a candidate against a reference");
  add_common(cmp, cmp_opts, true);
  cmp->add_option("--reference", reference,
                  "Reference config (default: the candidate config without perturbation, defect "
                  "or oscillation; perturbed-twin compares against taylor-green-coupled)");

  auto* certify = app.add_subcommand("certify", "Gronwall-certify the relative columns of a CSV");
  std::string input, certify_out;
  double c0 = 0.0, zeta = 0.5;
  certify->add_option("--input", input, "CSV written by compare")->required();
  certify->add_option("--c0", c0, "Initial constant")->required();
  certify->add_option("--zeta", zeta, "Absorption parameter in (0, 1)");
  certify->add_option("--out", certify_out, "Write certify.json into this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*verify) {
      if (verify_out.empty()) return cmd_verify(nullptr, verify_seed, fault);
      const fs::path out = prepare_out(verify_out);
      return cmd_verify(&out, verify_seed, fault);
    }
    if (*simulate) return cmd_simulate(sim_opts);
    if (*cmp) return cmd_compare(cmp_opts, reference);
    if (*certify) return cmd_certify(input, c0, zeta, certify_out);
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const NumericalAbort& e) {
    std::fprintf(stderr, "numerical abort: %s\n", e.what());
    return 3;
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
