#pragma once

/// \file
/// Time integration of the Ericksen–Leslie system on a periodic grid.
///
/// Semi-discretisation (both backends):
///   ∂t v = P[ g − ½((∇v)v + div(v⊗v)) + (∇d)ᵀq + div T^L ]
///   ∂t d = −(∇d)v + skw(∇v)d − (I − d⊗d)(λ sym(∇v)d + q) [+ s_d]
/// with q = F_h − div F_S the exact gradient of the discrete Frank functional
/// and T^L evaluated with e = −(I − d⊗d)(λ sym(∇v)d + q). The elastic force
/// (∇d)ᵀq differs from −div T^E by the gradient ∇F, which the projection
/// removes. With skew-adjoint derivatives this semi-discrete system satisfies
/// the energy balance d/dt(½‖v‖² + 𝔉_h(d)) = −∫(dissipation − cross) + ⟨g,v⟩
/// exactly for unit d; the remaining defect comes from time stepping and
/// renormalisation.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nematic/fields.hpp"
#include "nematic/leslie.hpp"
#include "nematic/oseen_frank.hpp"

namespace nematic {

struct SimulationState {
  double t = 0.0;
  long steps = 0;
  VectorField v;
  ScalarField p;
  VectorField d;
};

enum class Scheme { rk2, semi_implicit };
Scheme parse_scheme(const std::string& s);
std::string to_string(Scheme s);

struct SolverConfig {
  double dt = 1e-3;
  double t_end = 0.0;
  Scheme scheme = Scheme::rk2;
  Backend backend = Backend::spectral;
  int renormalize_every = 1;
  double cfl = 0.4;
  double unit_tol = 1e-10;
  double div_tol = 1e-9;
  /// Monitor sample (and stored state) every `cadence` steps.
  int cadence = 1;

  void validate() const;
};

/// Body force g(x, t) and an optional director source s_d(x, t) (used only by
/// manufactured solutions).
struct Forcing {
  std::function<VectorField(const Grid&, double)> velocity;
  std::function<VectorField(const Grid&, double)> director;
};

enum class ElasticForm { force, stress };

struct Scenario {
  std::string label;
  Grid grid;
  FrankConstants frank;
  LeslieCoefficients leslie;
  VectorField v0;
  VectorField d0;
  Forcing forcing;
  ElasticForm elastic_form = ElasticForm::force;

  /// Throws ValidationError for inadmissible constants or initial data.
  void validate(double unit_tol) const;
};

/// Pointwise quantities of one state that both the time stepper and the
/// monitors need.
struct StateEvaluation {
  MatrixField grad_v;
  MatrixField grad_d;
  VectorField q;
  VectorField e;
  VectorField rhs_v;
  VectorField rhs_d;
  ScalarField pressure;
  VectorField g;    // body force at this time (empty if none)
  VectorField s_d;  // director source (empty if none)
};

/// Physical model on one grid: operators, tensors, coefficients and forcing.
class Model {
 public:
  Model(const Scenario& sc, Backend backend);

  const Operators& ops() const { return ops_; }
  const ElasticTensors& tensors() const { return et_; }
  ElasticTensors& tensors() { return et_; }
  const LeslieCoefficients& leslie() const { return leslie_; }
  const Forcing& forcing() const { return forcing_; }
  ElasticForm elastic_form() const { return form_; }

  StateEvaluation evaluate(double t, const VectorField& v, const VectorField& d) const;

  VectorField director_rhs(const VectorField& v, const VectorField& d) const;
  VectorField velocity_rhs(double t, const VectorField& v, const VectorField& d,
                           ScalarField* pressure = nullptr) const;

  /// ½((∇v)v + div(v⊗v)).
  VectorField advection(const VectorField& v, const MatrixField& grad_v) const;

  /// Effective diffusivities for the time step restriction.
  double elastic_stiffness() const;
  double viscous_stiffness() const;

 private:
  Operators ops_;
  ElasticTensors et_;
  LeslieCoefficients leslie_;
  Forcing forcing_;
  ElasticForm form_;
};

/// Largest stable dt: C_cfl · min(h/‖v‖∞, h_eff²/k_max) with h_eff = h/π for
/// the spectral backend (its largest wavenumber is π/h) and h_eff = h for
/// central differences.
double cfl_limit(const Model& m, const SolverConfig& cfg, const VectorField& v);

struct StepReport {
  double unit_drift_before_renormalize = 0.0;
  double div_v = 0.0;
};

/// Advances one step. Throws NumericalAbort on non-finite values or a CFL
/// violation. `eval` may carry a precomputed evaluation of `s`.
SimulationState step(const Model& m, const SimulationState& s, const SolverConfig& cfg,
                     const StateEvaluation* eval = nullptr, StepReport* report = nullptr);

struct MonitorSample {
  double t = 0.0;
  double kinetic = 0.0;
  double frank = 0.0;
  double total = 0.0;
  double dissipation = 0.0;  // ∫ dissipation density
  double cross = 0.0;        // ∫ cross term
  double power = 0.0;        // ⟨g, v⟩ + (q, s_d)
  double energy_residual = 0.0;  // residual over the interval ending here
  double div_v = 0.0;
  double unit_drift = 0.0;
};

struct EnergyTerms {
  double kinetic, frank, dissipation, cross, power;
};
EnergyTerms energy_terms(const Model& m, const SimulationState& s, const StateEvaluation& ev);

struct Trajectory {
  std::vector<SimulationState> states;   // at monitor samples
  std::vector<MonitorSample> monitor;    // one per stored state
  std::vector<double> step_residuals;    // per-step energy residual
  double cumulative_dissipation = 0.0;   // ∫ (dissipation − cross) dt
};

/// Runs to cfg.t_end. The initial CFL check throws ValidationError; a later
/// violation or a non-finite value throws NumericalAbort.
Trajectory run(const Scenario& sc, const SolverConfig& cfg,
               const std::function<void(const SimulationState&, const MonitorSample&)>& hook = {});
Trajectory run(const Model& m, SimulationState s0, const SolverConfig& cfg,
               const std::function<void(const SimulationState&, const MonitorSample&)>& hook = {});

// ---- manufactured solutions ------------------------------------------------

/// Smooth exact pair (v*, d*) on a 2D-in-3D periodic box [0, 2π)²:
///   v* = a(t) (sin x cos y, −cos x sin y, 0),  a(t) = A cos t
///   d* = (sin θ cos φ, sin θ sin φ, cos θ),
///   θ = θ0 + B sin(x) cos(y − t),  φ = C cos(x + t).
struct Manufactured {
  double A = 0.5, B = 0.2, C = 0.3, theta0 = 0.6;

  Vec3 velocity(const Vec3& x, double t) const;
  Vec3 velocity_dt(const Vec3& x, double t) const;
  Vec3 director(const Vec3& x, double t) const;
  Vec3 director_dt(const Vec3& x, double t) const;
};

/// Sources g, s_d making (v*, d*) an exact solution. With reference_n == 0 the
/// sources are computed with the model's own operators (the semi-discrete
/// system then reproduces v*, d* exactly, isolating time errors); otherwise on
/// a spectral grid with reference_n cells per axis and sampled onto the model
/// grid (which must divide it), approximating the continuous sources.
Forcing manufactured_forcing(const Manufactured& ms, const Scenario& base, Backend backend,
                             int reference_n);

struct ConvergenceLevel {
  int n = 0;
  double dt = 0.0;
  double error_v = 0.0;  // L2 error at t_end
  double error_d = 0.0;
};
struct ConvergenceReport {
  std::vector<ConvergenceLevel> temporal;
  std::vector<ConvergenceLevel> spatial;
  double temporal_order = 0.0;
  double spatial_order = 0.0;
};

struct ConvergenceSettings {
  Scheme scheme = Scheme::rk2;
  Backend backend = Backend::spectral;
  double t_end = 0.2;
  int temporal_n = 16;
  std::vector<double> dts{2e-3, 1e-3, 5e-4};
  std::vector<int> spatial_ns{8, 16, 32};
  double spatial_dt = 1e-3;
  int reference_n = 64;
};

ConvergenceReport run_convergence(const Manufactured& ms, const Scenario& base,
                                  const ConvergenceSettings& set);

}  // namespace nematic
