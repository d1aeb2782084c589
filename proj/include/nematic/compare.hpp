#pragma once

/// \file
/// Weak–strong comparison: runs a candidate and a reference scenario, lifts
/// the candidate to measures (optional oscillation atoms and injected defect
/// mass), evaluates E, W and K at common sample times and certifies the
/// Gronwall bound.

#include <string>
#include <vector>

#include "nematic/rel_energy.hpp"
#include "nematic/scenario.hpp"

namespace nematic {

struct ComparisonRow {
  double t = 0.0;
  double kinetic = 0.0;
  double frank = 0.0;
  double defect_half_mass = 0.0;
  double total = 0.0;
  double dissipation = 0.0;
  double cross_term = 0.0;
  double energy_residual = 0.0;
  double E_rel = 0.0;
  double W_rel = 0.0;
  double K = 0.0;
  double gronwall_bound = 0.0;
  double margin = 0.0;
};

/// Per-sample data that does not depend on C_δ.
struct ComparisonSeries {
  std::vector<ComparisonRow> rows;  // K, gronwall_bound, margin not yet filled
  std::vector<double> K_unit;       // K / C_δ
  double c0 = 0.0;
  double max_form_gap = 0.0;        // |compact − expanded| relative
  double sobolev_ratio = 0.0;       // max ‖d−d̃‖²_L6 / ‖∇d−∇d̃‖²_L2
  double min_jensen_gap = 0.0;
};

struct ComparisonResult {
  ComparisonSeries series;
  GronwallReport report;
  double cdelta = 0.0;
  bool cdelta_calibrated = false;
  double zeta = 0.0;
  double minimal_zeta = 0.0;
};

/// Both configs must share grid, constants, backend and t_end; time steps may
/// differ as long as the sample times (reference dt × cadence) coincide.
ComparisonSeries compare_series(const ScenarioConfig& candidate, const ScenarioConfig& reference);

std::vector<RelativeEnergySample> relative_samples(const ComparisonSeries& s, double cdelta);

/// Fills K, bound and margin columns and certifies with the given C_δ.
GronwallReport certify_series(ComparisonSeries& s, double cdelta, double zeta);

/// Smallest C_δ on the grid 2^k · 1e-6 (k = 0..40) for which the series
/// certifies with nonnegative worst margin; NaN if none does.
double calibrate_cdelta(const ComparisonSeries& s, double zeta);

/// Calibration twin for a reference config: the same scenario with the
/// director perturbed by init.epsilon (independent seed).
ScenarioConfig calibration_twin(const ScenarioConfig& reference);

/// Full workflow. C_δ comes from the candidate config (certify.cdelta > 0),
/// otherwise from a calibration sweep on calibration_twin(reference).
ComparisonResult compare(const ScenarioConfig& candidate, const ScenarioConfig& reference);

}  // namespace nematic
