#include "nematic/compare.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace nematic {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError("candidate and reference configs differ in " + what);
}

bool same_leslie(const LeslieCoefficients& a, const LeslieCoefficients& b) {
  return a.mu1 == b.mu1 && a.mu2 == b.mu2 && a.mu3 == b.mu3 && a.mu4 == b.mu4 &&
         a.mu5 == b.mu5 && a.mu6 == b.mu6 && a.lambda == b.lambda;
}

Tensor3 defect_direction(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  Tensor3 G;
  for (double& x : G.a) x = nd(gen);
  return G;
}

}  // namespace

ComparisonSeries compare_series(const ScenarioConfig& cc, const ScenarioConfig& rc) {
  require(cc.grid_n == rc.grid_n && cc.grid_L == rc.grid_L && cc.grid_dim == rc.grid_dim, "grid");
  require(cc.K1 == rc.K1 && cc.K2 == rc.K2 && cc.K3 == rc.K3, "Frank constants");
  require(same_leslie(cc.leslie, rc.leslie), "Leslie coefficients");
  require(cc.solver.backend == rc.solver.backend, "backend");
  require(cc.solver.t_end == rc.solver.t_end, "t_end");
  if (cc.defect_mass < 0.0 || cc.oscillation < 0.0)
    throw ValidationError("candidate.defect_mass and candidate.oscillation must be nonnegative");

  const Scenario cs = build_scenario(cc), rs = build_scenario(rc);
  SolverConfig ccfg = cc.solver, rcfg = rc.solver;
  const double period = rcfg.dt * rcfg.cadence;
  const double ratio = period / ccfg.dt;
  ccfg.cadence = int(std::lround(ratio));
  if (ccfg.cadence < 1 || std::abs(ratio - ccfg.cadence) > 1e-9 * ratio)
    throw ValidationError("candidate dt does not divide the reference sample period");

  const Trajectory ct = run(cs, ccfg), rt = run(rs, rcfg);
  if (ct.states.size() != rt.states.size())
    throw ValidationError("candidate and reference produce different sample times");

  const Model rm(rs, rcfg.backend);
  const Operators& ops = rm.ops();
  const ElasticTensors& et = rm.tensors();
  const Tensor3 gamma = defect_direction(cc.seed + 104729);

  ComparisonSeries out;
  out.min_jensen_gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < rt.states.size(); ++k) {
    const SimulationState& c = ct.states[k];
    const SimulationState& r = rt.states[k];
    if (std::abs(c.t - r.t) > 1e-9 * std::max(1.0, r.t))
      throw ValidationError("candidate and reference sample times do not match");

    GeneralizedYoungMeasure nu;
    DefectMeasure mu;
    Candidate cand{&c.v, &c.d, nullptr, nullptr};
    const MatrixField Gc = ops.grad(c.d);
    if (cc.oscillation > 0.0) {
      nu = oscillating_pair(Gc, cc.oscillation, cc.seed + 15485863);
      cand.nu = &nu;
      for (std::size_t i = 0; i < Gc.size(); ++i)
        out.min_jensen_gap = std::min(out.min_jensen_gap, jensen_gap(nu, i, Gc[i]));
    }
    if (cc.defect_mass > 0.0 && c.t > cc.defect_start) {
      mu = uniform_defect(cs.grid, cc.defect_mass, gamma);
      cand.mu = &mu;
    }

    const double E = relative_energy(ops, et, cand, r.v, r.d);
    const double Ex = relative_energy_expanded(ops, et, cand, r.v, r.d);
    out.max_form_gap = std::max(out.max_form_gap, std::abs(E - Ex) / std::max(1e-300, std::abs(E)));
    const double W = relative_dissipation(ops, et, cs.leslie, c.v, c.d, r.v, r.d);
    const VectorField dtd = rm.evaluate(r.t, r.v, r.d).rhs_d;
    out.K_unit.push_back(gronwall_weight_unit(ops, r.v, r.d, dtd));

    const VectorField dd = c.d - r.d;
    const MatrixField dG = Gc - ops.grad(r.d);
    const double den = inner(dG, dG);
    if (den > 0.0) out.sobolev_ratio = std::max(out.sobolev_ratio, std::pow(l6(dd), 2) / den);

    if (k == 0) out.c0 = initial_constant_c0(ops, et, cand, r.v, r.d, cc.c_initial);

    const EnergyBreakdown eb = total_energy(ops, et, c.v, c.d, cand.nu, cand.mu);
    const MonitorSample& ms = ct.monitor[k];
    ComparisonRow row;
    row.t = r.t;
    row.kinetic = eb.kinetic;
    row.frank = eb.frank;
    row.defect_half_mass = eb.defect;
    row.total = eb.total;
    row.dissipation = ms.dissipation;
    row.cross_term = ms.cross;
    row.energy_residual = ms.energy_residual;
    row.E_rel = E;
    row.W_rel = W;
    out.rows.push_back(row);
  }
  if (!std::isfinite(out.min_jensen_gap)) out.min_jensen_gap = 0.0;
  return out;
}

std::vector<RelativeEnergySample> relative_samples(const ComparisonSeries& s, double cdelta) {
  std::vector<RelativeEnergySample> out;
  for (std::size_t k = 0; k < s.rows.size(); ++k)
    out.push_back({s.rows[k].t, s.rows[k].E_rel, s.rows[k].W_rel, cdelta * s.K_unit[k]});
  return out;
}

GronwallReport certify_series(ComparisonSeries& s, double cdelta, double zeta) {
  GronwallReport rep = gronwall_certify(relative_samples(s, cdelta), s.c0, zeta);
  for (std::size_t k = 0; k < s.rows.size(); ++k) {
    s.rows[k].K = cdelta * s.K_unit[k];
    s.rows[k].gronwall_bound = rep.bound[k];
    s.rows[k].margin = rep.margin[k];
  }
  return rep;
}

double calibrate_cdelta(const ComparisonSeries& s, double zeta) {
  for (int k = 0; k <= 40; ++k) {
    const double cd = 1e-6 * std::ldexp(1.0, k);
    const GronwallReport r = gronwall_certify(relative_samples(s, cd), s.c0, zeta);
    if (r.pass && r.worst_margin >= 0.0) return cd;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

ScenarioConfig calibration_twin(const ScenarioConfig& reference) {
  ScenarioConfig c = reference;
  c.perturbation = reference.init_epsilon;
  c.perturbation_seed = reference.seed + 1000003;
  c.defect_mass = 0.0;
  c.oscillation = 0.0;
  return c;
}

ComparisonResult compare(const ScenarioConfig& candidate, const ScenarioConfig& reference) {
  ComparisonResult res;
  res.zeta = candidate.zeta;
  res.minimal_zeta = minimal_zeta(candidate.leslie);
  if (!(res.zeta > 0.0 && res.zeta < 1.0)) throw ValidationError("certify.zeta must lie in (0, 1)");
  if (!zeta_admissible(candidate.leslie, res.zeta))
    throw ValidationError("certify.zeta = " + std::to_string(res.zeta) +
                          " is not admissible for these Leslie coefficients (needs >= " +
                          std::to_string(res.minimal_zeta) + ")");
  res.series = compare_series(candidate, reference);
  if (candidate.cdelta > 0.0) {
    res.cdelta = candidate.cdelta;
  } else {
    const ComparisonSeries twin = compare_series(calibration_twin(reference), reference);
    res.cdelta = calibrate_cdelta(twin, res.zeta);
    res.cdelta_calibrated = true;
    if (!std::isfinite(res.cdelta))
      throw NumericalAbort("C_delta calibration sweep found no certifying value");
  }
  res.report = certify_series(res.series, res.cdelta, res.zeta);
  return res;
}

}  // namespace nematic
