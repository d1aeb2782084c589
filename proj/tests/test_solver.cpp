#include "doctest.h"
#include "nematic/scenario.hpp"
#include "nematic/solver.hpp"
#include "random_inputs.hpp"

using namespace nematic;

namespace {

const LeslieCoefficients kParodi{0.2, -0.4, 0.1, 0.5, 0.3, 0.2, -0.3};
const LeslieCoefficients kNonParodi{0.5, -0.4, 0.1, 1.0, 0.5, 0.3, 0.2};

VectorField tilted(const Grid& g, std::uint64_t seed, double amp = 0.05) {
  VectorField d = band_limited_random(g, 2, amp, seed);
  for (std::size_t c = 0; c < d.size(); ++c) d[c][2] += 1.0;
  renormalize(d);
  return d;
}

Scenario base_scenario(int n, const LeslieCoefficients& l, int dim = 2) {
  Scenario sc;
  sc.grid = Grid::cube(n, 2 * M_PI, dim);
  sc.frank = FrankConstants::from_K(0.5, 0.4, 0.6);
  sc.leslie = l;
  sc.v0 = VectorField(sc.grid);
  sc.d0 = VectorField(sc.grid, Vec3::unit(2));
  return sc;
}

}  // namespace

TEST_CASE("director rhs examples") {
  Scenario sc = base_scenario(16, kNonParodi);
  Model m(sc, Backend::spectral);
  const Grid& g = sc.grid;
  VectorField zero(g);
  VectorField uni(g, Vec3{{0.6, 0.0, 0.8}});
  CHECK(linf(m.director_rhs(zero, uni)) == 0.0);

  // near-rigid rotation: ∇v(0) = ω(e2⊗e1 − e1⊗e2), and sym ∇v(0) = 0
  const double w = 0.7;
  VectorField v = sample(g, [&](const Vec3& x) {
    return Vec3{{-w * std::sin(x[1]), w * std::sin(x[0]), 0.0}};
  });
  VectorField r = m.director_rhs(v, uni);
  Mat3 W;
  W(0, 1) = -w;
  W(1, 0) = w;
  CHECK(testing_support::max_abs_diff(r[0], W * uni[0]) < 1e-13);

  // cross-product residual of the returned rhs
  VectorField d = tilted(g, 5, 0.1);
  VectorField vr = m.ops().project_divfree(band_limited_random(g, 2, 0.05, 6));
  StateEvaluation ev = m.evaluate(0.0, vr, d);
  double worst = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    const Mat3& G = ev.grad_v[c];
    const Vec3 inner = ev.rhs_d[c] + ev.grad_d[c] * vr[c] - skw(G) * d[c] +
                       sc.leslie.lambda * (sym(G) * d[c]) + ev.q[c];
    worst = std::max(worst, norm(cross(d[c], inner)));
  }
  CHECK(worst < 1e-12);
  CHECK(linf(ev.rhs_d - m.director_rhs(vr, d)) < 1e-14);

  // e from the time derivative agrees with e from q along the director equation
  double e_gap = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    const Vec3 e1 = corotational_rate_e(ev.rhs_d[c], vr[c], ev.grad_d[c], ev.grad_v[c], d[c]);
    e_gap = std::max(e_gap, norm(e1 - ev.e[c]));
  }
  CHECK(e_gap < 1e-12);
}

TEST_CASE("velocity rhs examples") {
  Scenario sc = base_scenario(16, kParodi);
  const Grid& g = sc.grid;
  {
    Model m(sc, Backend::spectral);
    VectorField d(g, Vec3{{0.0, 0.6, 0.8}});
    CHECK(linf(m.velocity_rhs(0.0, VectorField(g), d)) == 0.0);
  }
  // Navier–Stokes limit: no elasticity, only μ4
  sc.frank.k1 = sc.frank.k2 = sc.frank.k3 = sc.frank.k4 = sc.frank.k5 = 0.0;
  sc.leslie = {0.0, 0.0, 0.0, 0.8, 0.0, 0.0, 0.0};
  Model m(sc, Backend::spectral);
  const Operators& ops = m.ops();
  VectorField v = ops.project_divfree(band_limited_random(g, 2, 0.05, 8));
  VectorField d = tilted(g, 9, 0.1);
  MatrixField G = ops.grad(v);
  VectorField adv(g);
  for (std::size_t c = 0; c < g.size(); ++c) adv[c] = G[c] * v[c];
  VectorField expect = ops.project_divfree(0.4 * ops.laplacian(v) - adv);
  CHECK(linf(m.velocity_rhs(0.0, v, d) - expect) < 1e-12);

  // Taylor–Green: rhs = −μ4 v, and the amplitude decays like exp(−μ4 t)
  VectorField tg = taylor_green(g, 1.0);
  VectorField uni(g, Vec3::unit(2));
  CHECK(linf(m.velocity_rhs(0.0, tg, uni) + 0.8 * tg) < 1e-12);
  sc.v0 = tg;
  sc.d0 = uni;
  SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.1;
  Trajectory tr = run(m, {0.0, 0, tg, ScalarField(g), uni}, cfg);
  const double amp = l2(tr.states.back().v) / l2(tg);
  CHECK(amp == doctest::Approx(std::exp(-0.8 * 0.1)).epsilon(1e-6));
}

TEST_CASE("fixed point and single-state trajectory") {
  Scenario sc = base_scenario(8, kParodi);
  SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.0;
  Trajectory tr = run(sc, cfg);
  CHECK(tr.states.size() == 1);
  cfg.t_end = 0.01;
  for (Scheme s : {Scheme::rk2, Scheme::semi_implicit}) {
    cfg.scheme = s;
    tr = run(sc, cfg);
    CHECK(linf(tr.states.back().v) == 0.0);
    CHECK(linf(tr.states.back().d - sc.d0) == 0.0);
    CHECK(tr.states.back().t == doctest::Approx(0.01));
  }
}

TEST_CASE("force and stress forms of the elastic term agree for resolved data") {
  Scenario sc = base_scenario(32, kNonParodi);
  VectorField d = tilted(sc.grid, 12, 0.02);
  VectorField v = VectorField(sc.grid);
  Model force(sc, Backend::spectral);
  sc.elastic_form = ElasticForm::stress;
  Model stress(sc, Backend::spectral);
  VectorField a = force.velocity_rhs(0.0, v, d), b = stress.velocity_rhs(0.0, v, d);
  MESSAGE("force vs stress form gap " << linf(a - b) << " of " << linf(a));
  CHECK(linf(a - b) <= 1e-6 * linf(a));
}

TEST_CASE("step guards") {
  Scenario sc = base_scenario(16, kParodi);
  sc.d0 = tilted(sc.grid, 3);
  SolverConfig cfg;
  cfg.dt = 1.0;
  cfg.t_end = 1.0;
  CHECK_THROWS_AS(run(sc, cfg), ValidationError);
  cfg.dt = -1.0;
  CHECK_THROWS_AS(run(sc, cfg), ValidationError);

  Model m(sc, Backend::spectral);
  SimulationState s{0.0, 0, VectorField(sc.grid), ScalarField(sc.grid), sc.d0};
  cfg.dt = 1e-3;
  s.v[3][0] = std::nan("");
  CHECK_THROWS_AS(step(m, s, cfg), NumericalAbort);
  s.v = VectorField(sc.grid, Vec3{{1e4, 0.0, 0.0}});
  CHECK_THROWS_AS(step(m, s, cfg), NumericalAbort);

  sc.leslie.mu4 = -1.0;
  CHECK_THROWS_AS(run(sc, cfg), ValidationError);
}

TEST_CASE("norm preservation and incompressibility") {
  Scenario sc = base_scenario(16, kNonParodi);
  sc.v0 = taylor_green(sc.grid, 0.5);
  sc.d0 = tilted(sc.grid, 4, 0.08);
  SolverConfig cfg;
  cfg.dt = 2e-3;
  cfg.t_end = 0.1;
  cfg.cadence = 10;
  Model m(sc, cfg.backend);
  SimulationState s{0.0, 0, sc.v0, ScalarField(sc.grid), sc.d0};
  StepReport rep;
  for (int k = 0; k < 20; ++k) {
    s = step(m, s, cfg, nullptr, &rep);
    CHECK(unit_drift(s.d) <= 1e-14);
    CHECK(rep.div_v <= 1e-9);
  }
  CHECK(rep.unit_drift_before_renormalize < 1e-4);
  CHECK(rep.unit_drift_before_renormalize > 0.0);
}

TEST_CASE("discrete energy law") {
  ScenarioConfig c;
  c.init_preset = "relaxing-director";
  c.solver.t_end = 0.2;
  std::vector<double> mean_residual;
  for (double dt : {2e-3, 1e-3, 5e-4, 2.5e-4}) {
    c.solver.dt = dt;
    Trajectory tr = run(build_scenario(c), c.solver);
    double s = 0.0;
    for (double r : tr.step_residuals) s += std::abs(r);
    mean_residual.push_back(s / tr.step_residuals.size());
    CHECK(tr.cumulative_dissipation >= 0.0);
    for (std::size_t k = 1; k < tr.monitor.size(); ++k)
      CHECK(tr.monitor[k].total <= tr.monitor[k - 1].total + 1e-12);
  }
  for (std::size_t k = 1; k < mean_residual.size(); ++k) {
    const double order = std::log2(mean_residual[k - 1] / mean_residual[k]);
    MESSAGE("per-step residual " << mean_residual[k] << " order " << order);
    CHECK(order >= 1.0);
  }
}

TEST_CASE("determinism") {
  ScenarioConfig c;
  c.init_preset = "taylor-green-coupled";
  c.solver.t_end = 0.05;
  c.solver.dt = 1e-3;
  Trajectory a = run(build_scenario(c), c.solver), b = run(build_scenario(c), c.solver);
  REQUIRE(a.monitor.size() == b.monitor.size());
  for (std::size_t k = 0; k < a.monitor.size(); ++k) {
    CHECK(a.monitor[k].total == b.monitor[k].total);
    CHECK(a.monitor[k].dissipation == b.monitor[k].dissipation);
  }
  CHECK(linf(a.states.back().d - b.states.back().d) == 0.0);
}

TEST_CASE("harmonic-map-like limit decreases the Frank energy") {
  Scenario sc = base_scenario(16, {0.2, -0.4, 0.1, 0.5, 0.3, 0.2, 0.0});
  sc.d0 = tilted(sc.grid, 13, 0.1);
  SolverConfig cfg;
  cfg.dt = 2e-3;
  cfg.t_end = 0.1;
  Model m(sc, cfg.backend);
  SimulationState s{0.0, 0, VectorField(sc.grid), ScalarField(sc.grid), sc.d0};
  double prev = frank_energy(m.ops(), s.d, m.tensors());
  for (int k = 0; k < 50; ++k) {
    StateEvaluation ev = m.evaluate(s.t, s.v, s.d);
    ev.rhs_v = VectorField(sc.grid);  // frozen velocity
    s = step(m, s, cfg, &ev);
    const double e = frank_energy(m.ops(), s.d, m.tensors());
    CHECK(e < prev);
    prev = e;
  }
}

TEST_CASE("manufactured solution: temporal order") {
  Manufactured ms;
  Scenario base = base_scenario(16, kNonParodi);
  ConvergenceSettings set;
  set.spatial_ns.clear();
  set.t_end = 0.1;
  set.scheme = Scheme::rk2;
  ConvergenceReport r = run_convergence(ms, base, set);
  MESSAGE("RK2 temporal order " << r.temporal_order);
  CHECK(r.temporal_order > 1.8);
  set.scheme = Scheme::semi_implicit;
  r = run_convergence(ms, base, set);
  MESSAGE("semi-implicit temporal order " << r.temporal_order);
  CHECK(r.temporal_order > 0.9);
  CHECK(r.temporal_order < 1.5);
}

TEST_CASE("manufactured solution: spatial order") {
  Manufactured ms;
  Scenario base = base_scenario(16, kNonParodi);
  ConvergenceSettings set;
  set.dts.clear();
  set.t_end = 0.05;
  set.spatial_dt = 5e-4;
  set.spatial_ns = {16, 32};
  set.reference_n = 64;
  set.backend = Backend::central;
  ConvergenceReport r = run_convergence(ms, base, set);
  MESSAGE("central spatial order " << r.spatial_order);
  CHECK(r.spatial_order > 1.8);
  set.backend = Backend::spectral;
  r = run_convergence(ms, base, set);
  MESSAGE("spectral errors " << r.spatial[0].error_v + r.spatial[0].error_d << " -> "
                             << r.spatial[1].error_v + r.spatial[1].error_d);
  CHECK(r.spatial[1].error_v + r.spatial[1].error_d < 1e-6);
}
