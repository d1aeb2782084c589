#pragma once

/// \file
/// Plain-text scenario configuration and the shipped initial-data / forcing
/// presets.
///
/// Config format: one `key = value` per line, `#` starts a comment, blank
/// lines ignored. Unknown keys and malformed values are rejected.
///
///   grid.n grid.L grid.dim
///   frank.K1 frank.K2 frank.K3
///   leslie.mu1 .. leslie.mu6 leslie.lambda
///   solver.dt solver.t_end solver.scheme solver.backend solver.renormalize_every
///   init.preset init.seed init.amplitude init.velocity init.epsilon
///   init.perturbation init.perturbation_seed
///   forcing.preset forcing.amplitude
///   output.cadence
///   candidate.defect_mass candidate.defect_start candidate.oscillation
///   certify.zeta certify.cdelta certify.c

#include <cstdint>
#include <map>
#include <string>

#include "nematic/solver.hpp"

namespace nematic {

struct ScenarioConfig {
  int grid_n = 16;
  double grid_L = 2 * M_PI;
  int grid_dim = 2;
  double K1 = 0.5, K2 = 0.4, K3 = 0.6;
  LeslieCoefficients leslie{0.2, -0.4, 0.1, 0.5, 0.3, 0.2, -0.3};
  SolverConfig solver{.dt = 1e-3, .t_end = 0.5, .cadence = 10};
  std::string init_preset = "relaxing-director";
  std::uint64_t seed = 1;
  double init_amplitude = 0.05;
  double init_velocity = 0.5;
  double init_epsilon = 1e-2;
  // Extra director perturbation εψ applied after any preset.
  double perturbation = 0.0;
  std::uint64_t perturbation_seed = 7919;
  std::string forcing_preset = "none";
  double forcing_amplitude = 0.1;

  // Candidate modifications used by the comparison workflow.
  double defect_mass = 0.0;   // total injected defect mass ⟪μ_t,1⟫
  double defect_start = 0.0;  // injected only for t > defect_start
  double oscillation = 0.0;   // ±amplitude of two-atom oscillations around ∇d

  double zeta = 0.5;
  double cdelta = 0.0;  // 0: calibrate
  double c_initial = 1.0;

  /// Keys explicitly set in the parsed file (for manifests).
  std::map<std::string, std::string> raw;

  static ScenarioConfig defaults() { return {}; }
};

ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);
/// Applies one key/value pair; throws ValidationError for unknown keys or bad
/// values.
void apply_setting(ScenarioConfig& cfg, const std::string& key, const std::string& value);
std::string to_config_text(const ScenarioConfig& cfg);

/// Builds the scenario (grid, constants, initial data, forcing) and validates
/// it together with the solver settings.
Scenario build_scenario(const ScenarioConfig& cfg);

/// Initial data presets: quiescent, relaxing-director, taylor-green-coupled,
/// perturbed-twin.
void apply_initial_preset(Scenario& sc, const ScenarioConfig& cfg);
/// d ← (d + εψ)/|d + εψ| with a band-limited ψ, max|ψ| = 1, drawn from seed.
void perturb_director(VectorField& d, double epsilon, std::uint64_t seed);
/// Forcing presets: none, shear.
Forcing make_forcing(const std::string& preset, double amplitude);

/// Taylor–Green field (sin κx cos κy, −cos κx sin κy, 0)·U with κ = 2π/L.
VectorField taylor_green(const Grid& g, double U);

}  // namespace nematic
