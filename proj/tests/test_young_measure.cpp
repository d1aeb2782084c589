#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "nematic/scenario.hpp"
#include "nematic/young_measure.hpp"
#include "random_inputs.hpp"

using namespace nematic;
using testing_support::Rng;

namespace {

Mat3 unit_matrix(Rng& r) {
  Mat3 S = r.mat();
  return S * (1.0 / norm(S));
}

Vec3 in_ball(Rng& r, double radius) {
  Vec3 h = r.unit_vec();
  return h * (radius * 0.5 * (r.scalar() + 1.0));
}

const ElasticTensors kTensors(FrankConstants::from_K(0.8, 0.5, 1.1));

TestIntegrand frank_integrand(const ElasticTensors& et) {
  return {[&et](const Vec3&, const Vec3& h, const Mat3& S) { return energy_density(h, S, et); },
          Growth::quadratic, {}};
}

}  // namespace

TEST_CASE("recession transform") {
  Rng r(101);
  TestIntegrand sq{[](const Vec3&, const Vec3&, const Mat3& S) { return norm2(S); },
                   Growth::quadratic, {}};
  TestIntegrand one{[](const Vec3&, const Vec3&, const Mat3&) { return 1.0; }, Growth::quadratic, {}};
  const Vec3 x{};
  for (int k = 0; k < 20; ++k) {
    const Vec3 h = in_ball(r, 1.0);
    const Mat3 S = unit_matrix(r);
    CHECK(recession_eval(sq, x, h, S) == doctest::Approx(1.0 - norm2(h)).epsilon(1e-13));
    CHECK(std::abs(recession_eval(one, x, h, S)) < 1e-14);
    // bidegree (2, 2) part survives unchanged on the boundary
    TestIntegrand top{[](const Vec3&, const Vec3& a, const Mat3& B) {
                        return norm2(a) * trace(B) * trace(B) + dot(a, B * a) * B(0, 1);
                      },
                      Growth::quadratic, {}};
    CHECK(recession_eval(top, x, h, S) == doctest::Approx(top.f(x, h, S)).epsilon(1e-12));
  }
  // closed form against the defining formula in the open balls, and continuity
  for (int k = 0; k < 50; ++k) {
    const Vec3 h = in_ball(r, 0.95);
    const Mat3 S = unit_matrix(r) * (0.9 * 0.5 * (r.scalar() + 1.0));
    TestIntegrand F = frank_integrand(kTensors);
    const double a = 1.0 - norm2(h), b = 1.0 - norm2(S);
    const double direct = F.f(x, h * (1 / std::sqrt(a)), S * (1 / std::sqrt(b))) * a * b;
    CHECK(recession_eval(F, x, h, S) == doctest::Approx(direct).epsilon(1e-11));
  }
  const Vec3 h = in_ball(r, 0.8);
  const Mat3 S = unit_matrix(r);
  TestIntegrand F = frank_integrand(kTensors);
  TestIntegrand G{F.f, Growth::general, {}};
  const double edge = recession_eval(F, x, h, S);
  const double near = recession_eval(G, x, h, S * (1.0 - 1e-9));
  CHECK(std::abs(edge - near) < 1e-6 * std::max(1.0, std::abs(edge)));
  CHECK_THROWS_AS(recession_eval(G, x, h, S), ValidationError);
  G.extension = [&](const Vec3& y, const Vec3& a, const Mat3& B) { return recession_eval(F, y, a, B); };
  CHECK(recession_eval(G, x, h, S) == edge);
  CHECK_THROWS_AS(recession_eval(F, x, h, S * 1.1), ValidationError);
}

TEST_CASE("recession of the Ericksen integrand") {
  Rng r(102);
  const ElasticTensors& et = kTensors;
  auto SFS = [&](const Vec3& h, const Mat3& S) { return transpose(S) * F_S(h, S, et); };
  for (int k = 0; k < 40; ++k) {
    const Vec3 h = in_ball(r, 1.0);
    const Mat3 S = k % 2 ? unit_matrix(r) : unit_matrix(r) * (0.5 * (r.scalar() + 1.0));
    const double h2 = norm2(h);
    // only the Λ part (linear in S, constant in h) is scaled by 1 − |h|²
    const Mat3 expect = SFS(h, S) - et.k1() * h2 * trace(S) * transpose(S) -
                        2.0 * et.k2() * h2 * (transpose(S) * skw(S));
    CHECK(testing_support::max_abs_diff(quadratic_recession(SFS, h, S), expect) < 1e-12);
    const Vec3 hF = cross(h, F_h(h, S, et));
    CHECK(testing_support::max_abs_diff(
              quadratic_recession([&](const Vec3& a, const Mat3& B) { return cross(a, F_h(a, B, et)); },
                                  h, S),
              hF) < 1e-12);
  }
}

TEST_CASE("pairings") {
  Grid g = Grid::cube(16, 2 * M_PI, 3);
  Operators ops(g, Backend::spectral);
  VectorField d = band_limited_random(g, 2, 0.05, 3);
  for (std::size_t c = 0; c < d.size(); ++c) d[c][0] += 1.0;
  renormalize(d);
  GeneralizedYoungMeasure nu = dirac_from_field(ops, d);
  nu.validate();
  TestIntegrand F = frank_integrand(kTensors);
  const double quad = frank_energy(ops, d, kTensors);
  CHECK(std::abs(pairing(nu, F, d) - quad) <= 1e-12 * quad);

  // concentration only
  GeneralizedYoungMeasure conc(g);
  for (auto& o : conc.oscillation) o = {OscillationAtom{1.0, Mat3{}}};
  conc.concentration[5] = 1.0;
  Mat3 S;
  S(0, 2) = 1.0;
  conc.angle[5] = {AngleAtom{1.0, Vec3{}, S}};
  conc.validate();
  TestIntegrand sq{[](const Vec3&, const Vec3&, const Mat3& A) { return norm2(A); },
                   Growth::quadratic, {}};
  CHECK(pairing(conc, sq, d) == doctest::Approx(g.cell_volume()).epsilon(1e-14));
  CHECK(conc.concentration_mass() == doctest::Approx(g.cell_volume()));

  // symmetric two-atom oscillation against a linear integrand
  Rng r(5);
  GeneralizedYoungMeasure sym(g);
  for (auto& o : sym.oscillation) {
    const Mat3 A = r.mat();
    o = {OscillationAtom{0.5, A}, OscillationAtom{0.5, -A}};
  }
  TestIntegrand lin{[](const Vec3& x, const Vec3& h, const Mat3& A) {
                      return std::sin(x[0]) * (A(0, 1) + 2 * A(2, 2)) + h[0] * A(1, 0);
                    },
                    Growth::quadratic, {}};
  CHECK(std::abs(pairing(sym, lin, d)) < 1e-13);
  const MatrixField bar = barycenter(sym);
  CHECK(linf(bar) < 1e-15);
}

TEST_CASE("defect pairing") {
  Grid g = Grid::cube(8, 1.0, 2);
  DefectMeasure zero(g);
  MatrixField I(g, Mat3::identity());
  CHECK(defect_pairing(zero, I) == 0.0);
  Rng r(7);
  const DefectMeasure mu = uniform_defect(g, 2.5, r.t3());
  mu.validate();
  CHECK(mu.total_mass() == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(defect_pairing(mu, I) == doctest::Approx(2.5).epsilon(1e-13));
  // index evaluation Σ Γ_ijl Γ_ijk A_kl
  const Tensor3 G = mu.direction[0][0].G;
  const Mat3 A = r.mat();
  double direct = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) direct += G(i, j, l) * G(i, j, k) * A(k, l);
  CHECK(defect_pairing(mu, MatrixField(g, A)) == doctest::Approx(2.5 * direct).epsilon(1e-13));
  DefectMeasure bad = mu;
  bad.mass[1] = -1.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("Dirac lift, barycenter and Jensen") {
  Grid g = Grid::cube(8, 2 * M_PI, 2);
  Operators ops(g, Backend::spectral);
  VectorField cst(g, Vec3::unit(1));
  GeneralizedYoungMeasure flat = dirac_from_field(ops, cst);
  for (const auto& o : flat.oscillation) CHECK(norm(o[0].S) == 0.0);
  VectorField d = band_limited_random(g, 2, 0.1, 9);
  const MatrixField G = ops.grad(d);
  CHECK(linf(barycenter(dirac_from_field(ops, d)) - G) == 0.0);
  GeneralizedYoungMeasure pair = oscillating_pair(G, 0.3, 4);
  pair.validate();
  CHECK(linf(barycenter(pair) - G) < 1e-15);
  CHECK(jensen_gap(pair, 3, G[3]) == doctest::Approx(0.09).epsilon(1e-12));

  Rng r(11);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    GeneralizedYoungMeasure m(g);
    const int n = 1 + k % 5;
    double sw = 0.0;
    for (int a = 0; a < n; ++a) {
      const double w = r.positive(0.01, 1.0);
      m.oscillation[0].push_back({w, 3.0 * r.mat()});
      sw += w;
    }
    for (auto& a : m.oscillation[0]) a.w /= sw;
    worst = std::min(worst, jensen_gap(m, 0, 2.0 * r.mat()));
  }
  CHECK(worst >= -1e-12);

  GeneralizedYoungMeasure bad(g);
  for (auto& o : bad.oscillation) o = {OscillationAtom{0.7, Mat3{}}};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = flat;
  bad.concentration[0] = 1.0;
  bad.angle[0] = {AngleAtom{1.0, Vec3{{2.0, 0.0, 0.0}}, Mat3::identity() * (1 / std::sqrt(3.0))}};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("measure-valued residuals") {
  ScenarioConfig cfg;
  cfg.init_preset = "taylor-green-coupled";
  cfg.leslie = {0.5, -0.4, 0.1, 1.0, 0.5, 0.3, 0.2};
  Scenario sc = build_scenario(cfg);
  Model m(sc, Backend::spectral);
  const Operators& ops = m.ops();
  auto phis = smooth_test_functions(ops, 10, true, 500);
  auto psis = smooth_test_functions(ops, 10, false, 600);

  {
    SlabData z;
    z.t0 = 0.0;
    z.t1 = 0.1;
    z.v0 = z.v1 = VectorField(sc.grid);
    z.d0 = z.d1 = VectorField(sc.grid, Vec3::unit(2));
    z.nu0 = z.nu1 = dirac_from_field(ops, z.d0);
    z.mu0 = z.mu1 = DefectMeasure(sc.grid);
    MvResiduals r = mv_residuals(ops, m.tensors(), sc.leslie, z, phis, psis);
    CHECK(r.max_velocity() == 0.0);
    CHECK(r.max_director() == 0.0);
    CHECK(r.max_q() == 0.0);
  }

  std::vector<double> worst;
  SlabData last;
  for (double dt : {2e-3, 1e-3, 5e-4}) {
    cfg.solver.dt = dt;
    cfg.solver.t_end = 0.04;
    Trajectory tr = run(sc, cfg.solver);
    std::vector<double> acc_v(phis.size()), acc_d(psis.size());
    double qmax = 0.0;
    for (std::size_t k = 0; k + 1 < tr.states.size(); ++k) {
      const auto& a = tr.states[k];
      const auto& b = tr.states[k + 1];
      SlabData s;
      s.t0 = a.t;
      s.t1 = b.t;
      s.v0 = a.v;
      s.v1 = b.v;
      s.d0 = a.d;
      s.d1 = b.d;
      s.dt_d0 = m.evaluate(a.t, a.v, a.d).rhs_d;
      s.dt_d1 = m.evaluate(b.t, b.v, b.d).rhs_d;
      s.nu0 = dirac_from_field(ops, a.d);
      s.nu1 = dirac_from_field(ops, b.d);
      s.mu0 = s.mu1 = DefectMeasure(sc.grid);
      MvResiduals r = mv_residuals(ops, m.tensors(), sc.leslie, s, phis, psis);
      for (std::size_t i = 0; i < phis.size(); ++i) acc_v[i] += r.velocity[i];
      for (std::size_t i = 0; i < psis.size(); ++i) acc_d[i] += r.director[i];
      qmax = std::max(qmax, r.max_q());
      last = std::move(s);
    }
    double w = 0.0;
    for (double x : acc_v) w = std::max(w, std::abs(x));
    for (double x : acc_d) w = std::max(w, std::abs(x));
    MESSAGE("dt " << dt << " accumulated residual " << w << " q identity " << qmax);
    worst.push_back(w);
  }
  CHECK(worst[1] < worst[0]);
  CHECK(worst[2] < worst[1]);
  CHECK(worst[2] < 1e-4);

  // linearity in the defect measure
  MvResiduals base = mv_residuals(ops, m.tensors(), sc.leslie, last, phis, psis);
  Rng rr(3);
  last.mu0 = uniform_defect(sc.grid, 0.3, rr.t3());
  last.mu1 = uniform_defect(sc.grid, 0.5, rr.t3());
  MvResiduals pert = mv_residuals(ops, m.tensors(), sc.leslie, last, phis, psis);
  const double h = last.t1 - last.t0;
  for (std::size_t i = 0; i < phis.size(); ++i) {
    const MatrixField G = ops.grad(phis[i]);
    const double expect = -h * (defect_pairing(last.mu0, G) + defect_pairing(last.mu1, G));
    CHECK(pert.velocity[i] - base.velocity[i] == doctest::Approx(expect).epsilon(1e-10));
  }
  CHECK(pert.director == base.director);
}

TEST_CASE("measure snapshot round trip") {
  Grid g = Grid::cube(4, 1.0, 2);
  Operators ops(g, Backend::central);
  GeneralizedYoungMeasure nu = oscillating_pair(ops.grad(band_limited_random(g, 1, 0.2, 2)), 0.1, 3);
  Mat3 S;
  S(1, 1) = 1.0;
  nu.concentration[2] = 0.25;
  nu.angle[2] = {AngleAtom{1.0, Vec3{{0.1, 0.2, 0.3}}, S}};
  Rng r(4);
  DefectMeasure mu = uniform_defect(g, 0.7, r.t3());
  auto path = (std::filesystem::temp_directory_path() / "nematic_measure_test.txt").string();
  write_measures(path, nu, mu);
  GeneralizedYoungMeasure nu2;
  DefectMeasure mu2;
  read_measures(path, nu2, mu2);
  std::remove(path.c_str());
  CHECK(nu2.grid == g);
  CHECK(nu2.concentration == nu.concentration);
  CHECK(mu2.mass == mu.mass);
  for (std::size_t c = 0; c < g.size(); ++c) {
    REQUIRE(nu2.oscillation[c].size() == 2);
    CHECK(nu2.oscillation[c][1].S.a == nu.oscillation[c][1].S.a);
    CHECK(mu2.direction[c][0].G.a == mu.direction[c][0].G.a);
  }
  CHECK(nu2.angle[2][0].h[2] == 0.3);
}
