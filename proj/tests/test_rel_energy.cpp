#include "doctest.h"
#include "nematic/compare.hpp"
#include "nematic/rel_energy.hpp"
#include "random_inputs.hpp"

using namespace nematic;
using testing_support::Rng;

namespace {

const LeslieCoefficients kParodi{0.2, -0.4, 0.1, 0.5, 0.3, 0.2, -0.3};

VectorField unit_field(const Grid& g, std::uint64_t seed, double amp = 0.3) {
  VectorField d = band_limited_random(g, 2, amp, seed);
  for (std::size_t c = 0; c < d.size(); ++c) d[c][2] += 1.0;
  renormalize(d);
  return d;
}

struct Setup {
  Grid g = Grid::cube(8, 2 * M_PI, 2);
  Operators ops{g, Backend::spectral};
  ElasticTensors et{FrankConstants::from_K(0.5, 0.4, 0.6)};
};

ScenarioConfig short_config(double t_end = 0.1) {
  ScenarioConfig c;
  c.init_preset = "taylor-green-coupled";
  c.solver.dt = 1e-3;
  c.solver.t_end = t_end;
  c.solver.cadence = 10;
  return c;
}

}  // namespace

TEST_CASE("total energy") {
  Setup s;
  VectorField v(s.g), d(s.g, Vec3::unit(2));
  EnergyBreakdown e = total_energy(s.ops, s.et, v, d);
  CHECK(e.total == 0.0);

  v = band_limited_random(s.g, 2, 0.4, 3);
  d = unit_field(s.g, 4);
  e = total_energy(s.ops, s.et, v, d);
  CHECK(e.kinetic == doctest::Approx(0.5 * inner(v, v)).epsilon(1e-15));
  CHECK(e.frank == doctest::Approx(frank_energy(s.ops, d, s.et)).epsilon(1e-15));
  const GeneralizedYoungMeasure dirac = dirac_from_field(s.ops, d);
  const EnergyBreakdown ed = total_energy(s.ops, s.et, v, d, &dirac);
  CHECK(std::abs(ed.frank - e.frank) <= 1e-12 * e.frank);

  const DefectMeasure mu = uniform_defect(s.g, 0.7, Rng(5).t3());
  const EnergyBreakdown em = total_energy(s.ops, s.et, v, d, nullptr, &mu);
  CHECK(em.defect == doctest::Approx(0.35).epsilon(1e-14));
  CHECK(em.total - e.total == doctest::Approx(0.35).epsilon(1e-12));
}

TEST_CASE("energy monitor") {
  std::vector<MonitorSample> flat(5);
  for (int k = 0; k < 5; ++k) {
    flat[k].t = 0.1 * k;
    flat[k].total = 2.0;
  }
  EnergyMonitorReport r = energy_monitor(flat);
  CHECK(r.residual.size() == 4);
  CHECK(r.max_abs == 0.0);
  CHECK(r.inequality_holds);

  // E = e^{-t}, dissipation = e^{-t}: residual is the trapezoid error, O(h³) per step
  std::vector<MonitorSample> decay(11);
  for (int k = 0; k <= 10; ++k) {
    decay[k].t = 0.01 * k;
    decay[k].total = std::exp(-decay[k].t);
    decay[k].dissipation = std::exp(-decay[k].t);
  }
  r = energy_monitor(decay);
  CHECK(r.max_abs < 1e-6);
  CHECK(r.max_abs > 0.0);
  // energy growing without power violates the inequality
  decay[5].total += 1e-3;
  CHECK_FALSE(energy_monitor(decay).inequality_holds);

  Scenario sc = build_scenario(short_config(0.05));
  SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.05;
  Trajectory tr = run(sc, cfg);
  for (const MonitorSample& m : tr.monitor) CHECK(std::abs(m.cross) < 1e-12 * (1 + m.dissipation));
}

TEST_CASE("relative energy") {
  Setup s;
  Rng rng(17);
  const VectorField v = band_limited_random(s.g, 2, 0.4, 5);
  const VectorField d = unit_field(s.g, 6);

  Candidate twin{&v, &d, nullptr, nullptr};
  CHECK(relative_energy(s.ops, s.et, twin, v, d) == 0.0);
  CHECK(relative_energy_expanded(s.ops, s.et, twin, v, d) == 0.0);

  // velocity-only difference
  const VectorField dv = band_limited_random(s.g, 2, 0.2, 8);
  VectorField v2 = v;
  v2 += dv;
  Candidate shifted{&v2, &d, nullptr, nullptr};
  CHECK(relative_energy(s.ops, s.et, shifted, v, d) ==
        doctest::Approx(0.5 * inner(dv, dv)).epsilon(1e-13));

  // defect adds exactly half its mass and E increases strictly with the mass
  double prev = 0.0;
  for (double m : {0.1, 0.2, 0.4, 0.8}) {
    const DefectMeasure mu = uniform_defect(s.g, m, rng.t3());
    Candidate c{&v, &d, nullptr, &mu};
    const double E = relative_energy(s.ops, s.et, c, v, d);
    CHECK(E == doctest::Approx(0.5 * m).epsilon(1e-14));
    CHECK(E > prev);
    prev = E;
  }

  // nonnegativity and agreement of both forms on random pairs with oscillation
  // and concentration parts
  double worst_gap = 0.0;
  for (int n = 0; n < 200; ++n) {
    const ElasticTensors et(FrankConstants::from_K(rng.positive(), rng.positive(), rng.positive()));
    const VectorField vc = band_limited_random(s.g, 2, 0.5, 1000 + n);
    const VectorField dc = unit_field(s.g, 2000 + n, 0.5);
    const VectorField vr = band_limited_random(s.g, 2, 0.5, 3000 + n);
    const VectorField dr = unit_field(s.g, 4000 + n, 0.5);
    GeneralizedYoungMeasure nu = oscillating_pair(s.ops.grad(dc), rng.positive(0.0, 1.0), 5000 + n);
    for (std::size_t c = 0; c < s.g.size(); c += 7) {
      nu.concentration[c] = rng.positive(0.0, 0.5);
      Vec3 h = rng.unit_vec() * rng.positive(0.0, 1.0);
      Mat3 S = rng.mat();
      nu.angle[c] = {{1.0, h, S * (1.0 / norm(S))}};
    }
    const DefectMeasure mu = uniform_defect(s.g, rng.positive(0.0, 1.0), rng.t3());
    Candidate c{&vc, &dc, &nu, n % 2 ? &mu : nullptr};
    const double E = relative_energy(s.ops, et, c, vr, dr);
    const double Ex = relative_energy_expanded(s.ops, et, c, vr, dr);
    CHECK(E >= 0.0);
    worst_gap = std::max(worst_gap, std::abs(E - Ex) / E);
  }
  CHECK(worst_gap <= 1e-11);
}

TEST_CASE("relative dissipation") {
  Setup s;
  Rng rng(23);
  const VectorField v = band_limited_random(s.g, 2, 0.4, 9);
  const VectorField d = unit_field(s.g, 10);
  CHECK(relative_dissipation(s.ops, s.et, kParodi, v, d, v, d) == 0.0);

  // shear difference δ = (A sin y, 0, 0): sym ∇δ = ½A cos y (e1⊗e2 + e2⊗e1)
  const double A = 0.3;
  const LeslieCoefficients c{0.5, -0.4, 0.1, 1.0, 0.5, 0.3, 0.2};
  const VectorField delta = sample(s.g, [&](const Vec3& x) { return Vec3{{A * std::sin(x[1]), 0.0, 0.0}}; });
  VectorField v2 = v;
  v2 += delta;
  const double a1 = c.mu1 + c.lambda * (c.mu2 + c.mu3);
  const double a2 = c.mu5 + c.mu6 - c.lambda * (c.mu2 + c.mu3);
  double expect = 0.0;
  for (std::size_t k = 0; k < s.g.size(); ++k) {
    const double y = s.g.position(k)[1];
    Mat3 D;
    D(0, 1) = D(1, 0) = 0.5 * A * std::cos(y);
    const Vec3 Dd = D * d[k];
    expect += c.mu4 * norm2(D) + a2 * norm2(Dd) + a1 * std::pow(dot(d[k], Dd), 2);
  }
  expect *= s.g.cell_volume();
  CHECK(relative_dissipation(s.ops, s.et, c, v2, d, v, d) == doctest::Approx(expect).epsilon(1e-12));

  for (int n = 0; n < 200; ++n) {
    const LeslieCoefficients lc = testing_support::admissible_leslie(rng, n % 3 == 0);
    const VectorField vc = band_limited_random(s.g, 2, 0.5, 100 + n);
    const VectorField dc = unit_field(s.g, 200 + n, 0.5);
    const VectorField vr = band_limited_random(s.g, 2, 0.5, 300 + n);
    const VectorField dr = unit_field(s.g, 400 + n, 0.5);
    CHECK(relative_dissipation(s.ops, s.et, lc, vc, dc, vr, dr) >= 0.0);
  }
}

TEST_CASE("gronwall weight") {
  Setup s;
  const VectorField zero(s.g);
  CHECK(gronwall_weight_unit(s.ops, zero, zero, zero) == 1.0);
  CHECK(gronwall_weight_K(2.5, s.ops, zero, zero, zero) == 2.5);

  // with d̃ = ∂t d̃ = 0 the weight is a quadratic plus a linear term in ṽ
  const VectorField v = band_limited_random(s.g, 2, 0.4, 11);
  VectorField v2 = v, v3 = v;
  v2 *= 2.0;
  v3 *= 3.0;
  const double u1 = gronwall_weight_unit(s.ops, v, zero, zero);
  const double u2 = gronwall_weight_unit(s.ops, v2, zero, zero);
  const double u3 = gronwall_weight_unit(s.ops, v3, zero, zero);
  CHECK(std::abs(u3 - 3 * u2 + 3 * u1 - 1.0) < 1e-12 * u3);
  const double quad = 0.5 * (u2 - 2 * u1 + 1.0);
  CHECK(quad >= linf(v) * linf(v) * (1 - 1e-12));
  CHECK(u2 - 1.0 >= 2 * (u1 - 1.0));
}

TEST_CASE("gronwall certification") {
  std::vector<RelativeEnergySample> flat;
  for (int k = 0; k < 10; ++k) flat.push_back({0.1 * k, 0.3, 0.0, 0.0});
  CHECK(gronwall_certify(flat, 0.3, 0.5).pass);
  CHECK(gronwall_certify(flat, 0.31, 0.5).pass);
  const GronwallReport bad = gronwall_certify(flat, 0.29, 0.5);
  CHECK_FALSE(bad.pass);
  CHECK(bad.first_failure == 0);
  CHECK(bad.worst_margin == doctest::Approx(-0.01));

  const double c0 = 0.2, k = 1.5;
  std::vector<RelativeEnergySample> ex;
  for (int n = 0; n <= 100; ++n) {
    const double t = 0.01 * n;
    ex.push_back({t, c0 * std::exp(k * t), 0.0, k});
  }
  const GronwallReport r = gronwall_certify(ex, c0, 0.5);
  CHECK(r.pass);
  CHECK(r.integral_K == doctest::Approx(1.5).epsilon(1e-14));
  for (double m : r.margin_bound) CHECK(std::abs(m) < 1e-12);
  for (double m : r.margin_pre) CHECK(m >= 0.0);

  std::vector<RelativeEnergySample> unordered = flat;
  std::swap(unordered[2], unordered[3]);
  CHECK_THROWS_AS(gronwall_certify(unordered, 0.3, 0.5), ValidationError);
  CHECK_THROWS_AS(gronwall_certify(flat, 0.3, 1.0), ValidationError);
  CHECK_THROWS_AS(gronwall_certify(flat, 0.3, 0.0), ValidationError);
}

TEST_CASE("initial constant") {
  Setup s;
  const VectorField v = band_limited_random(s.g, 2, 0.4, 12);
  const VectorField d = unit_field(s.g, 13);
  Candidate twin{&v, &d, nullptr, nullptr};
  CHECK(initial_constant_c0(s.ops, s.et, twin, v, d, 1.0) == 0.0);

  const DefectMeasure mu = uniform_defect(s.g, 0.6, Rng(6).t3());
  Candidate defect{&v, &d, nullptr, &mu};
  CHECK(initial_constant_c0(s.ops, s.et, defect, v, d, 1.0) == doctest::Approx(0.3).epsilon(1e-14));

  std::vector<double> c0;
  for (double eps : {4e-2, 2e-2, 1e-2, 5e-3}) {
    VectorField dp = d;
    perturb_director(dp, eps, 99);
    Candidate c{&v, &dp, nullptr, nullptr};
    c0.push_back(initial_constant_c0(s.ops, s.et, c, v, d, 1.0));
  }
  for (std::size_t k = 1; k < c0.size(); ++k) {
    CHECK(c0[k] > 0.0);
    CHECK(c0[k - 1] / c0[k] == doctest::Approx(4.0).epsilon(0.05));
  }
}

TEST_CASE("zeta admissibility") {
  CHECK(minimal_zeta(kParodi) < 1e-15);
  CHECK(zeta_admissible(kParodi, 0.01));
  const LeslieCoefficients c{0.5, -0.4, 0.1, 1.0, 0.5, 0.3, 0.2};
  // (μ2+μ3−λ)² = 0.25, 4(μ5+μ6−λ(μ2+μ3)) = 3.44
  const double zmin = std::sqrt(0.25 / 3.44);
  CHECK(minimal_zeta(c) == doctest::Approx(zmin).epsilon(1e-14));
  CHECK(zeta_admissible(c, zmin * 1.001));
  CHECK_FALSE(zeta_admissible(c, zmin * 0.999));
}

TEST_CASE("comparison workflow") {
  const ScenarioConfig ref = short_config();
  ScenarioConfig cand = ref;
  cand.cdelta = 1.0;
  const ComparisonResult twin = compare(cand, ref);
  CHECK(twin.report.pass);
  CHECK(twin.series.c0 == 0.0);
  for (const ComparisonRow& r : twin.series.rows) CHECK(r.E_rel <= 1e-8);
  CHECK(twin.series.rows.size() == 11);

  // finer candidate time step with the same sample times
  ScenarioConfig fine = cand;
  fine.solver.dt = 5e-4;
  const ComparisonResult fr = compare(fine, ref);
  CHECK(fr.series.rows.size() == 11);
  CHECK(fr.series.rows.back().E_rel > 0.0);
  CHECK(fr.series.rows.back().E_rel < 1e-6);

  ScenarioConfig adversarial = cand;
  adversarial.defect_mass = 1.0;
  const ComparisonResult adv = compare(adversarial, ref);
  CHECK_FALSE(adv.report.pass);
  CHECK(adv.report.first_failure == 1);

  ScenarioConfig mismatch = cand;
  mismatch.K1 = 0.7;
  CHECK_THROWS_AS(compare(mismatch, ref), ValidationError);
  ScenarioConfig bad_zeta = cand;
  bad_zeta.zeta = 1.5;
  CHECK_THROWS_AS(compare(bad_zeta, ref), ValidationError);
}

TEST_CASE("perturbed comparison with calibrated constant") {
  const ScenarioConfig ref = short_config();
  ScenarioConfig cand = ref;
  cand.perturbation = 1e-2;
  cand.perturbation_seed = 4242;
  const ComparisonResult r = compare(cand, ref);
  CHECK(r.cdelta_calibrated);
  CHECK(std::isfinite(r.cdelta));
  CHECK(r.series.c0 > 0.0);
  CHECK(r.series.c0 < 1e-2);
  CHECK(r.report.pass);
  CHECK(r.report.worst_margin > 0.0);
  CHECK(r.series.max_form_gap < 1e-10);
}
