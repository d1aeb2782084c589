#pragma once

/// \file
/// Total energy and the energy-law monitor, the relative energy E and relative
/// dissipation W between a candidate (fields plus measures) and a reference
/// state, the Gronwall weight K, and certification of the stability bound
///   E(t) + ∫W ≤ c0 + ζ∫W + ∫K E   and   E(t) ≤ c0 exp(∫K).

#include <string>
#include <vector>

#include "nematic/solver.hpp"
#include "nematic/young_measure.hpp"

namespace nematic {

struct EnergyBreakdown {
  double kinetic = 0.0;
  double frank = 0.0;
  double defect = 0.0;  // ½⟪μ_t, 1⟫
  double total = 0.0;
};

/// Frank part through the measure pairing when `nu` is given, else by
/// quadrature of F(d, ∇d).
EnergyBreakdown total_energy(const Operators& ops, const ElasticTensors& et, const VectorField& v,
                             const VectorField& d, const GeneralizedYoungMeasure* nu = nullptr,
                             const DefectMeasure* mu = nullptr);

struct EnergyMonitorReport {
  /// ΔE_total + ∫(dissipation − cross − power) over each sample interval
  /// (trapezoidal rule on the samples).
  std::vector<double> residual;
  double max_abs = 0.0;
  /// Every residual ≤ tol (the energy inequality direction).
  bool inequality_holds = true;
};
EnergyMonitorReport energy_monitor(const std::vector<MonitorSample>& samples, double tol = 1e-10);

/// Candidate of a comparison: fields and optional measures. Without `nu` the
/// Dirac measure at ∇d is used; without `mu` the defect is zero.
struct Candidate {
  const VectorField* v = nullptr;
  const VectorField* d = nullptr;
  const GeneralizedYoungMeasure* nu = nullptr;
  const DefectMeasure* mu = nullptr;
};

/// ½‖v−ṽ‖² + ½⟪μ,1⟫ + ½⟪ν,(S−∇d̃):Λ:(S−∇d̃)⟫ + ½⟪ν,(S⊗h−∇d̃⊗d̃)⋮Θ⋮(S⊗h−∇d̃⊗d̃)⟫.
double relative_energy(const Operators& ops, const ElasticTensors& et, const Candidate& cand,
                       const VectorField& v_ref, const VectorField& d_ref);
/// The same quantity through the sum-of-squares expansion in k1..k5.
double relative_energy_expanded(const Operators& ops, const ElasticTensors& et,
                                const Candidate& cand, const VectorField& v_ref,
                                const VectorField& d_ref);

/// (μ1+λ(μ2+μ3))‖d·Dd − d̃·D̃d̃‖² + (μ5+μ6−λ(μ2+μ3))‖Dd − D̃d̃‖² + μ4‖D − D̃‖²
/// + ‖d×q − d̃×q̃‖², D = sym ∇v, q the discrete variational derivative.
double relative_dissipation(const Operators& ops, const ElasticTensors& et,
                            const LeslieCoefficients& c, const VectorField& v,
                            const VectorField& d, const VectorField& v_ref,
                            const VectorField& d_ref);

/// K / C_δ: ‖ṽ‖²_∞ + ‖ṽ‖²_{W1,3} + ‖d̃‖²_{W2,3} + ‖d̃‖⁴_{W1,6} + ‖∂t d̃‖_∞
/// + ‖∂t d̃‖_{W1,3} + ‖sym ∇ṽ‖_∞ + 1.
double gronwall_weight_unit(const Operators& ops, const VectorField& v_ref,
                            const VectorField& d_ref, const VectorField& dt_d_ref);
inline double gronwall_weight_K(double cdelta, const Operators& ops, const VectorField& v_ref,
                                const VectorField& d_ref, const VectorField& dt_d_ref) {
  return cdelta * gronwall_weight_unit(ops, v_ref, d_ref, dt_d_ref);
}

/// E(0) + ∫(∇d₀−∇d̃₀)⊗(d₀−d̃₀)⋮Θ⋮(∇d̃₀⊗d̃₀) + c‖d₀−d̃₀‖². The candidate gradient
/// is the barycenter of its measure when one is given.
double initial_constant_c0(const Operators& ops, const ElasticTensors& et, const Candidate& cand0,
                           const VectorField& v_ref0, const VectorField& d_ref0, double c);

/// (μ2+μ3) − λ must satisfy ((μ2+μ3) − λ)² ≤ ζ² · 4(μ5+μ6 − λ(μ2+μ3)).
bool zeta_admissible(const LeslieCoefficients& c, double zeta);
/// Smallest admissible ζ (0 under Parodi).
double minimal_zeta(const LeslieCoefficients& c);

struct RelativeEnergySample {
  double t = 0.0;
  double E = 0.0;
  double W = 0.0;
  double K = 0.0;
};

struct GronwallReport {
  double c0 = 0.0;
  double zeta = 0.0;
  std::vector<double> bound;         // c0 exp(∫₀ᵗ K)
  std::vector<double> margin_pre;    // rhs − lhs of the pre-Gronwall form
  std::vector<double> margin_bound;  // bound − E
  std::vector<double> margin;        // min of both
  double integral_K = 0.0;
  double worst_margin = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  int first_failure = -1;
};

/// Throws ValidationError for unordered samples or ζ ∉ (0, 1). A sample
/// passes when both margins are ≥ −(abs_tol + rel_tol·max(c0, E)).
GronwallReport gronwall_certify(const std::vector<RelativeEnergySample>& samples, double c0,
                                double zeta, double abs_tol = 1e-12, double rel_tol = 1e-10);

}  // namespace nematic
