#include "nematic/young_measure.hpp"

#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

namespace nematic {

namespace {

void check(bool ok, const std::string& what, std::size_t c) {
  if (!ok) throw ValidationError(what + " (cell " + std::to_string(c) + ")");
}

}  // namespace

void GeneralizedYoungMeasure::validate(double tol) const {
  const std::size_t n = grid.size();
  if (oscillation.size() != n || concentration.size() != n || angle.size() != n)
    throw ValidationError("Young measure does not match its grid");
  for (std::size_t c = 0; c < n; ++c) {
    double sw = 0.0;
    for (const auto& a : oscillation[c]) {
      check(a.w >= 0.0, "oscillation weight negative", c);
      sw += a.w;
    }
    check(std::abs(sw - 1.0) <= tol * std::max<std::size_t>(1, oscillation[c].size()),
          "oscillation weights do not sum to 1", c);
    check(concentration[c] >= 0.0 && std::isfinite(concentration[c]),
          "concentration density negative", c);
    if (angle[c].empty()) {
      check(concentration[c] == 0.0, "concentration without angle atoms", c);
      continue;
    }
    sw = 0.0;
    for (const auto& a : angle[c]) {
      check(a.w >= 0.0, "angle weight negative", c);
      check(norm(a.h) <= 1.0 + tol, "angle atom with |h| > 1", c);
      check(std::abs(norm(a.S) - 1.0) <= 1e-10, "angle atom with |S| != 1", c);
      sw += a.w;
    }
    check(std::abs(sw - 1.0) <= tol * angle[c].size(), "angle weights do not sum to 1", c);
  }
}

double GeneralizedYoungMeasure::concentration_mass() const {
  double s = 0.0;
  for (double m : concentration) s += m;
  return s * grid.cell_volume();
}

void DefectMeasure::validate(double tol) const {
  const std::size_t n = grid.size();
  if (mass.size() != n || direction.size() != n)
    throw ValidationError("defect measure does not match its grid");
  for (std::size_t c = 0; c < n; ++c) {
    check(mass[c] >= 0.0 && std::isfinite(mass[c]), "defect mass negative", c);
    if (mass[c] == 0.0) continue;
    double sw = 0.0;
    for (const auto& a : direction[c]) {
      check(a.w >= 0.0, "defect direction weight negative", c);
      check(std::abs(std::sqrt(norm2(a.G)) - 1.0) <= 1e-10, "defect direction with |G| != 1", c);
      sw += a.w;
    }
    check(!direction[c].empty() && std::abs(sw - 1.0) <= tol * direction[c].size(),
          "defect direction weights do not sum to 1", c);
  }
}

double DefectMeasure::total_mass() const {
  double s = 0.0;
  for (double m : mass) s += m;
  return s;
}

DefectMeasure uniform_defect(const Grid& g, double total_mass, const Tensor3& G) {
  if (total_mass < 0.0) throw ValidationError("defect mass must be nonnegative");
  const double n = std::sqrt(norm2(G));
  if (!(n > 0.0)) throw ValidationError("defect direction must be nonzero");
  DefectMeasure mu(g);
  const Tensor3 unit = G * (1.0 / n);
  for (std::size_t c = 0; c < g.size(); ++c) {
    mu.mass[c] = total_mass / double(g.size());
    mu.direction[c] = {DefectAtom{1.0, unit}};
  }
  return mu;
}

double recession_eval(const TestIntegrand& f, const Vec3& x, const Vec3& h, const Mat3& S) {
  const double nh = norm2(h), ns = norm2(S);
  constexpr double eps = 1e-14;
  if (nh > 1.0 + eps || ns > 1.0 + eps)
    throw ValidationError("recession transform needs |h| <= 1 and |S| <= 1");
  if (f.growth == Growth::quadratic)
    return quadratic_recession([&](const Vec3& a, const Mat3& B) { return f.f(x, a, B); }, h, S);
  if (nh >= 1.0 - eps || ns >= 1.0 - eps) {
    if (!f.extension)
      throw ValidationError("integrand has no continuous extension to the boundary");
    return f.extension(x, h, S);
  }
  const double a = 1.0 - nh, b = 1.0 - ns;
  return f.f(x, h * (1.0 / std::sqrt(a)), S * (1.0 / std::sqrt(b))) * a * b;
}

double pairing(const GeneralizedYoungMeasure& gym, const TestIntegrand& f, const VectorField& d) {
  if (!(gym.grid == d.grid())) throw ValidationError("pairing: measure and field grids differ");
  const double vol = gym.grid.cell_volume();
  double osc = 0.0, conc = 0.0;
  for (std::size_t c = 0; c < d.size(); ++c) {
    const Vec3 x = gym.grid.position(c);
    for (const auto& a : gym.oscillation[c]) osc += a.w * f.f(x, d[c], a.S);
    if (gym.concentration[c] == 0.0) continue;
    double s = 0.0;
    for (const auto& a : gym.angle[c]) s += a.w * recession_eval(f, x, a.h, a.S);
    conc += gym.concentration[c] * s;
  }
  return vol * (osc + conc);
}

double defect_pairing(const DefectMeasure& mu, const MatrixField& grad_phi) {
  double s = 0.0;
  for (std::size_t c = 0; c < mu.mass.size(); ++c) {
    if (mu.mass[c] == 0.0) continue;
    double cell = 0.0;
    for (const auto& a : mu.direction[c]) cell += a.w * t3_dot_t3(a.G, t3_dot_mat(a.G, grad_phi[c]));
    s += mu.mass[c] * cell;
  }
  return s;
}

GeneralizedYoungMeasure dirac_from_gradient(const MatrixField& grad_d) {
  GeneralizedYoungMeasure gym(grad_d.grid());
  for (std::size_t c = 0; c < grad_d.size(); ++c) gym.oscillation[c] = {OscillationAtom{1.0, grad_d[c]}};
  return gym;
}

GeneralizedYoungMeasure dirac_from_field(const Operators& ops, const VectorField& d) {
  return dirac_from_gradient(ops.grad(d));
}

GeneralizedYoungMeasure oscillating_pair(const MatrixField& grad_d, double amplitude,
                                         std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  GeneralizedYoungMeasure gym(grad_d.grid());
  for (std::size_t c = 0; c < grad_d.size(); ++c) {
    Mat3 P;
    for (auto& x : P.a) x = nd(gen);
    P *= amplitude / norm(P);
    gym.oscillation[c] = {OscillationAtom{0.5, grad_d[c] + P}, OscillationAtom{0.5, grad_d[c] - P}};
  }
  return gym;
}

MatrixField barycenter(const GeneralizedYoungMeasure& gym) {
  MatrixField b(gym.grid);
  for (std::size_t c = 0; c < b.size(); ++c)
    for (const auto& a : gym.oscillation[c]) b[c] += a.w * a.S;
  return b;
}

double jensen_gap(const GeneralizedYoungMeasure& gym, std::size_t c, const Mat3& A) {
  double lhs = 0.0;
  Mat3 bar;
  for (const auto& a : gym.oscillation[c]) {
    lhs += a.w * norm2(a.S - A);
    bar += a.w * a.S;
  }
  return lhs - norm2(bar - A);
}

// ---- residuals ---------------------------------------------------------------

namespace {

double max_abs(const std::vector<double>& r) {
  double m = 0.0;
  for (double x : r) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double MvResiduals::max_velocity() const { return max_abs(velocity); }
double MvResiduals::max_director() const { return max_abs(director); }
double MvResiduals::max_q() const { return max_abs(q); }

namespace {

/// Time-independent parts of the weak forms at one end of the slab.
struct EndTerms {
  std::vector<double> velocity;  // ((v·∇)v,φ) − ⟪ν,SᵀF_S:∇φ⟫ − 2⟪μ,Γ⋮(Γ·∇φ)⟫ + (T^L:∇φ) − ⟨g,φ⟩
  std::vector<double> director;  // (d × (∂t d + (∇d)v − Wd + λDd), ψ) + Q(ψ)
  std::vector<double> q;         // (d × q_h, ψ) − Q(ψ)
};

EndTerms end_terms(const Operators& ops, const ElasticTensors& et, const LeslieCoefficients& lc,
                   const VectorField& v, const VectorField& d, const VectorField& dt_d,
                   const GeneralizedYoungMeasure& nu, const DefectMeasure& mu,
                   const VectorField& g, const std::vector<MatrixField>& grad_phi,
                   const std::vector<VectorField>& phi, const std::vector<MatrixField>& grad_psi,
                   const std::vector<VectorField>& psi) {
  const Grid& grid = v.grid();
  const double vol = grid.cell_volume();
  const MatrixField gv = ops.grad(v), gd = ops.grad(d);
  const VectorField qh = variational_q_unchecked(ops, d, et);
  const Tensor3 eps = levi_civita();

  MatrixField TE(grid), TL(grid), RF(grid);
  VectorField adv(grid), kin(grid), Qv(grid), dq(grid);
  for (std::size_t c = 0; c < grid.size(); ++c) {
    const Vec3& dc = d[c];
    TE[c] = cell_pairing(nu, c, dc, [&](const Vec3& h, const Mat3& S) {
      return transpose(S) * F_S(h, S, et);
    });
    const Vec3 e = dt_d[c] + gd[c] * v[c] - skw(gv[c]) * dc;
    TL[c] = leslie_stress_unchecked(dc, e, gv[c], lc);
    adv[c] = gv[c] * v[c];
    kin[c] = cross(dc, e + lc.lambda * (sym(gv[c]) * dc));
    RF[c] = cross_matrix(dc) * F_S(dc, gd[c], et);
    Qv[c] = cell_pairing(nu, c, dc, [&](const Vec3& h, const Mat3& S) {
      return t3_mat(eps, S * transpose(F_S(h, S, et))) + cross(h, F_h(h, S, et));
    });
    dq[c] = cross(dc, qh[c]);
  }
  EndTerms out;
  for (std::size_t k = 0; k < phi.size(); ++k) {
    double r = inner(adv, phi[k]);
    double te = 0.0, tl = 0.0;
    for (std::size_t c = 0; c < grid.size(); ++c) {
      te += ddot(TE[c], grad_phi[k][c]);
      tl += ddot(TL[c], grad_phi[k][c]);
    }
    r += vol * (tl - te) - 2.0 * defect_pairing(mu, grad_phi[k]);
    if (g.size()) r -= inner(g, phi[k]);
    out.velocity.push_back(r);
  }
  for (std::size_t k = 0; k < psi.size(); ++k) {
    double rf = 0.0;
    for (std::size_t c = 0; c < grid.size(); ++c) rf += ddot(RF[c], grad_psi[k][c]);
    const double Q = vol * rf + inner(Qv, psi[k]);
    out.director.push_back(inner(kin, psi[k]) + Q);
    out.q.push_back(inner(dq, psi[k]) - Q);
  }
  return out;
}

}  // namespace

MvResiduals mv_residuals(const Operators& ops, const ElasticTensors& et,
                         const LeslieCoefficients& coeffs, const SlabData& s,
                         const std::vector<VectorField>& velocity_tests,
                         const std::vector<VectorField>& director_tests) {
  const double dt = s.t1 - s.t0;
  if (!(dt > 0.0)) throw ValidationError("time slab must have t1 > t0");
  VectorField dq0 = s.dt_d0, dq1 = s.dt_d1;
  if (dq0.size() == 0 || dq1.size() == 0) {
    dq0 = (1.0 / dt) * (s.d1 - s.d0);
    dq1 = dq0;
  }
  std::vector<MatrixField> gphi, gpsi;
  for (const auto& f : velocity_tests) gphi.push_back(ops.grad(f));
  for (const auto& f : director_tests) gpsi.push_back(ops.grad(f));
  const EndTerms a = end_terms(ops, et, coeffs, s.v0, s.d0, dq0, s.nu0, s.mu0, s.g0, gphi,
                               velocity_tests, gpsi, director_tests);
  const EndTerms b = end_terms(ops, et, coeffs, s.v1, s.d1, dq1, s.nu1, s.mu1, s.g1, gphi,
                               velocity_tests, gpsi, director_tests);
  MvResiduals r;
  const VectorField dv = s.v1 - s.v0;
  for (std::size_t k = 0; k < velocity_tests.size(); ++k)
    r.velocity.push_back(
        inner(dv, velocity_tests[k]) + 0.5 * dt * (a.velocity[k] + b.velocity[k]));
  for (std::size_t k = 0; k < director_tests.size(); ++k) {
    r.director.push_back(0.5 * dt * (a.director[k] + b.director[k]));
    r.q.push_back(0.5 * dt * (a.q[k] + b.q[k]));
  }
  return r;
}

std::vector<VectorField> smooth_test_functions(const Operators& ops, int count, bool solenoidal,
                                               std::uint64_t seed) {
  std::vector<VectorField> out;
  for (int k = 0; k < count; ++k) {
    VectorField f = band_limited_random(ops.grid(), 2, 1.0, seed + std::uint64_t(k));
    if (solenoidal) f = ops.project_divfree(f);
    f *= 1.0 / l2(f);
    out.push_back(std::move(f));
  }
  return out;
}

// ---- snapshots -----------------------------------------------------------------

void write_measures(const std::string& path, const GeneralizedYoungMeasure& gym,
                    const DefectMeasure& mu) {
  if (!(gym.grid == mu.grid)) throw ValidationError("measure grids differ");
  std::ofstream o(path);
  if (!o) throw ValidationError("cannot write measure file '" + path + "'");
  o << std::setprecision(17);
  const Grid& g = gym.grid;
  o << "NEMATIC-MEASURE 1\ngrid " << g.n[0] << ' ' << g.n[1] << ' ' << g.n[2] << ' ' << g.L[0]
    << ' ' << g.L[1] << ' ' << g.L[2] << '\n';
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (gym.oscillation[c].empty() && gym.angle[c].empty() && mu.mass[c] == 0.0 &&
        mu.direction[c].empty())
      continue;
    o << "cell " << c << " osc " << gym.oscillation[c].size() << " conc " << gym.concentration[c]
      << " angle " << gym.angle[c].size() << " defect " << mu.mass[c] << " dir "
      << mu.direction[c].size() << '\n';
    for (const auto& a : gym.oscillation[c]) {
      o << a.w;
      for (double x : a.S.a) o << ' ' << x;
      o << '\n';
    }
    for (const auto& a : gym.angle[c]) {
      o << a.w;
      for (int i = 0; i < 3; ++i) o << ' ' << a.h[i];
      for (double x : a.S.a) o << ' ' << x;
      o << '\n';
    }
    for (const auto& a : mu.direction[c]) {
      o << a.w;
      for (double x : a.G.a) o << ' ' << x;
      o << '\n';
    }
  }
  o << "end\n";
}

void read_measures(const std::string& path, GeneralizedYoungMeasure& gym, DefectMeasure& mu) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read measure file '" + path + "'");
  auto fail = [&](const std::string& why) {
    throw ValidationError("malformed measure file '" + path + "': " + why);
  };
  std::string tag;
  int version = 0;
  if (!(in >> tag >> version) || tag != "NEMATIC-MEASURE" || version != 1) fail("bad header");
  Grid g;
  if (!(in >> tag) || tag != "grid") fail("missing grid line");
  in >> g.n[0] >> g.n[1] >> g.n[2] >> g.L[0] >> g.L[1] >> g.L[2];
  if (!in) fail("bad grid line");
  g.validate();
  gym = GeneralizedYoungMeasure(g);
  mu = DefectMeasure(g);
  while (in >> tag) {
    if (tag == "end") return;
    if (tag != "cell") fail("expected 'cell'");
    std::size_t c, n_osc, n_ang, n_dir;
    std::string k1, k2, k3, k4, k5;
    double conc, mass;
    in >> c >> k1 >> n_osc >> k2 >> conc >> k3 >> n_ang >> k4 >> mass >> k5 >> n_dir;
    if (!in || c >= g.size() || k1 != "osc" || k2 != "conc" || k3 != "angle" || k4 != "defect" ||
        k5 != "dir")
      fail("bad cell line");
    gym.concentration[c] = conc;
    mu.mass[c] = mass;
    for (std::size_t i = 0; i < n_osc; ++i) {
      OscillationAtom a;
      in >> a.w;
      for (double& x : a.S.a) in >> x;
      gym.oscillation[c].push_back(a);
    }
    for (std::size_t i = 0; i < n_ang; ++i) {
      AngleAtom a;
      in >> a.w >> a.h[0] >> a.h[1] >> a.h[2];
      for (double& x : a.S.a) in >> x;
      gym.angle[c].push_back(a);
    }
    for (std::size_t i = 0; i < n_dir; ++i) {
      DefectAtom a;
      in >> a.w;
      for (double& x : a.G.a) in >> x;
      mu.direction[c].push_back(a);
    }
    if (!in) fail("truncated atom list");
  }
  fail("missing 'end'");
}

}  // namespace nematic
