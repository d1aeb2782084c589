#include "nematic/scenario.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace nematic {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty() || !std::isfinite(x))
    throw ValidationError("config key '" + key + "': expected a number, got '" + v + "'");
  return x;
}

long long to_int(const std::string& key, const std::string& v) {
  long long x = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ValidationError("config key '" + key + "': expected an integer, got '" + v + "'");
  return x;
}

}  // namespace

void apply_setting(ScenarioConfig& c, const std::string& key, const std::string& value) {
  auto num = [&] { return to_double(key, value); };
  auto integer = [&] { return to_int(key, value); };
  LeslieCoefficients& l = c.leslie;
  if (key == "grid.n") c.grid_n = int(integer());
  else if (key == "grid.L") c.grid_L = num();
  else if (key == "grid.dim") c.grid_dim = int(integer());
  else if (key == "frank.K1") c.K1 = num();
  else if (key == "frank.K2") c.K2 = num();
  else if (key == "frank.K3") c.K3 = num();
  else if (key == "leslie.mu1") l.mu1 = num();
  else if (key == "leslie.mu2") l.mu2 = num();
  else if (key == "leslie.mu3") l.mu3 = num();
  else if (key == "leslie.mu4") l.mu4 = num();
  else if (key == "leslie.mu5") l.mu5 = num();
  else if (key == "leslie.mu6") l.mu6 = num();
  else if (key == "leslie.lambda") l.lambda = num();
  else if (key == "solver.dt") c.solver.dt = num();
  else if (key == "solver.t_end") c.solver.t_end = num();
  else if (key == "solver.scheme") c.solver.scheme = parse_scheme(value);
  else if (key == "solver.backend") c.solver.backend = parse_backend(value);
  else if (key == "solver.renormalize_every") c.solver.renormalize_every = int(integer());
  else if (key == "init.preset") c.init_preset = value;
  else if (key == "init.seed") {
    const long long s = integer();
    if (s < 0) throw ValidationError("init.seed must be nonnegative");
    c.seed = std::uint64_t(s);
  } else if (key == "init.amplitude") c.init_amplitude = num();
  else if (key == "init.velocity") c.init_velocity = num();
  else if (key == "init.epsilon") c.init_epsilon = num();
  else if (key == "init.perturbation") c.perturbation = num();
  else if (key == "init.perturbation_seed") {
    const long long s = integer();
    if (s < 0) throw ValidationError("init.perturbation_seed must be nonnegative");
    c.perturbation_seed = std::uint64_t(s);
  } else if (key == "forcing.preset") c.forcing_preset = value;
  else if (key == "forcing.amplitude") c.forcing_amplitude = num();
  else if (key == "output.cadence") c.solver.cadence = int(integer());
  else if (key == "candidate.defect_mass") c.defect_mass = num();
  else if (key == "candidate.defect_start") c.defect_start = num();
  else if (key == "candidate.oscillation") c.oscillation = num();
  else if (key == "certify.zeta") c.zeta = num();
  else if (key == "certify.cdelta") c.cdelta = num();
  else if (key == "certify.c") c.c_initial = num();
  else throw ValidationError("unknown config key '" + key + "'");
  c.raw[key] = value;
}

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
    apply_setting(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string to_config_text(const ScenarioConfig& c) {
  std::ostringstream o;
  o << std::setprecision(17);
  const auto& l = c.leslie;
  o << "grid.n = " << c.grid_n << "\ngrid.L = " << c.grid_L << "\ngrid.dim = " << c.grid_dim
    << "\nfrank.K1 = " << c.K1 << "\nfrank.K2 = " << c.K2 << "\nfrank.K3 = " << c.K3
    << "\nleslie.mu1 = " << l.mu1 << "\nleslie.mu2 = " << l.mu2 << "\nleslie.mu3 = " << l.mu3
    << "\nleslie.mu4 = " << l.mu4 << "\nleslie.mu5 = " << l.mu5 << "\nleslie.mu6 = " << l.mu6
    << "\nleslie.lambda = " << l.lambda << "\nsolver.dt = " << c.solver.dt
    << "\nsolver.t_end = " << c.solver.t_end << "\nsolver.scheme = " << to_string(c.solver.scheme)
    << "\nsolver.backend = " << to_string(c.solver.backend)
    << "\nsolver.renormalize_every = " << c.solver.renormalize_every
    << "\ninit.preset = " << c.init_preset << "\ninit.seed = " << c.seed
    << "\ninit.amplitude = " << c.init_amplitude << "\ninit.velocity = " << c.init_velocity
    << "\ninit.epsilon = " << c.init_epsilon << "\ninit.perturbation = " << c.perturbation
    << "\ninit.perturbation_seed = " << c.perturbation_seed << "\nforcing.preset = " << c.forcing_preset
    << "\nforcing.amplitude = " << c.forcing_amplitude << "\noutput.cadence = " << c.solver.cadence
    << "\ncandidate.defect_mass = " << c.defect_mass
    << "\ncandidate.defect_start = " << c.defect_start
    << "\ncandidate.oscillation = " << c.oscillation << "\ncertify.zeta = " << c.zeta
    << "\ncertify.cdelta = " << c.cdelta << "\ncertify.c = " << c.c_initial << "\n";
  return o.str();
}

VectorField taylor_green(const Grid& g, double U) {
  const double kx = 2 * M_PI / g.L[0], ky = 2 * M_PI / g.L[1];
  return sample(g, [&](const Vec3& x) {
    return Vec3{{U * std::sin(kx * x[0]) * std::cos(ky * x[1]),
                 -U * (kx / ky) * std::cos(kx * x[0]) * std::sin(ky * x[1]), 0.0}};
  });
}

namespace {

VectorField tilted_director(const Grid& g, double amplitude, std::uint64_t seed) {
  VectorField d = band_limited_random(g, 2, amplitude, seed);
  for (std::size_t c = 0; c < d.size(); ++c) d[c][2] += 1.0;
  renormalize(d);
  return d;
}

}  // namespace

void apply_initial_preset(Scenario& sc, const ScenarioConfig& cfg) {
  const Grid& g = sc.grid;
  const std::string& p = cfg.init_preset;
  sc.v0 = VectorField(g);
  if (p == "quiescent") {
    sc.d0 = VectorField(g, Vec3::unit(2));
  } else if (p == "relaxing-director") {
    sc.d0 = tilted_director(g, cfg.init_amplitude, cfg.seed);
  } else if (p == "taylor-green-coupled" || p == "perturbed-twin") {
    sc.v0 = taylor_green(g, cfg.init_velocity);
    sc.d0 = tilted_director(g, cfg.init_amplitude, cfg.seed);
    if (p == "perturbed-twin") perturb_director(sc.d0, cfg.init_epsilon, cfg.seed + 7919);
  } else {
    throw ValidationError("unknown init.preset '" + p +
                          "' (quiescent, relaxing-director, taylor-green-coupled, perturbed-twin)");
  }
}

void perturb_director(VectorField& d, double epsilon, std::uint64_t seed) {
  if (epsilon == 0.0) return;
  VectorField psi = band_limited_random(d.grid(), 2, 1.0, seed);
  psi *= 1.0 / linf(psi);
  d.axpy(epsilon, psi);
  renormalize(d);
}

Forcing make_forcing(const std::string& preset, double amplitude) {
  Forcing f;
  if (preset == "none") return f;
  if (preset == "shear") {
    f.velocity = [amplitude](const Grid& g, double) {
      const double k = 2 * M_PI / g.L[1];
      return sample(g, [&](const Vec3& x) { return Vec3{{amplitude * std::sin(k * x[1]), 0.0, 0.0}}; });
    };
    return f;
  }
  throw ValidationError("unknown forcing.preset '" + preset + "' (none, shear)");
}

Scenario build_scenario(const ScenarioConfig& cfg) {
  cfg.solver.validate();
  Scenario sc;
  sc.label = cfg.init_preset;
  sc.grid = Grid::cube(cfg.grid_n, cfg.grid_L, cfg.grid_dim);
  sc.frank = FrankConstants::from_K(cfg.K1, cfg.K2, cfg.K3);
  sc.leslie = cfg.leslie;
  apply_initial_preset(sc, cfg);
  perturb_director(sc.d0, cfg.perturbation, cfg.perturbation_seed);
  sc.forcing = make_forcing(cfg.forcing_preset, cfg.forcing_amplitude);
  sc.validate(cfg.solver.unit_tol);
  return sc;
}

}  // namespace nematic
