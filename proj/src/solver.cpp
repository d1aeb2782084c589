#include "nematic/solver.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

namespace nematic {

Scheme parse_scheme(const std::string& s) {
  if (s == "rk2" || s == "explicit-rk2") return Scheme::rk2;
  if (s == "semi-implicit" || s == "semi_implicit") return Scheme::semi_implicit;
  throw ValidationError("unknown scheme '" + s + "' (expected rk2 or semi-implicit)");
}

std::string to_string(Scheme s) { return s == Scheme::rk2 ? "rk2" : "semi-implicit"; }

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("solver.dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ValidationError("solver.t_end must be >= 0");
  if (renormalize_every < 1) throw ValidationError("renormalize_every must be >= 1");
  if (cadence < 1) throw ValidationError("output.cadence must be >= 1");
  if (!(cfl > 0.0)) throw ValidationError("CFL constant must be positive");
}

void Scenario::validate(double unit_tol) const {
  grid.validate();
  if (!(frank.k1 > 0.0) || !(frank.k2 > 0.0) || frank.k3 < 0.0 || frank.k4 < 0.0 || frank.k5 < 0.0)
    throw ValidationError("elastic constants need k1, k2 > 0 and k3, k4, k5 >= 0");
  const auto violations = validate_dissipativity(leslie);
  if (!violations.empty()) {
    std::string msg = "Leslie coefficients violate dissipativity:";
    for (const auto& v : violations) msg += " [" + v + "]";
    throw ValidationError(msg);
  }
  if (!(v0.grid() == grid) || !(d0.grid() == grid))
    throw ValidationError("initial fields do not match the scenario grid");
  require_unit(d0, unit_tol, "initial director");
}

// ---- model -----------------------------------------------------------------

Model::Model(const Scenario& sc, Backend backend)
    : ops_(sc.grid, backend),
      et_(sc.frank),
      leslie_(sc.leslie),
      forcing_(sc.forcing),
      form_(sc.elastic_form) {}

double Model::elastic_stiffness() const {
  return std::max(et_.k1(), et_.k2()) + et_.theta_max_eigenvalue();
}

double Model::viscous_stiffness() const {
  const auto& c = leslie_;
  return 0.5 * (std::abs(c.mu1) + c.mu4 + std::abs(c.mu56()) +
                (std::abs(c.mu23()) + 1.0) * std::abs(c.lambda));
}

VectorField Model::advection(const VectorField& v, const MatrixField& grad_v) const {
  MatrixField vv(v.grid());
  VectorField a(v.grid());
  for (std::size_t c = 0; c < v.size(); ++c) {
    vv[c] = outer(v[c], v[c]);
    a[c] = grad_v[c] * v[c];
  }
  a += ops_.div(vv);
  a *= 0.5;
  return a;
}

namespace {

struct ElasticParts {
  MatrixField FS;
  VectorField q;
};

ElasticParts elastic_parts(const Operators& ops, const VectorField& d, const MatrixField& gd,
                           const ElasticTensors& et) {
  ElasticParts p{MatrixField(d.grid()), VectorField(d.grid())};
  for (std::size_t c = 0; c < d.size(); ++c) {
    p.FS[c] = F_S(d[c], gd[c], et);
    p.q[c] = F_h(d[c], gd[c], et);
  }
  p.q -= ops.div(p.FS);
  return p;
}

}  // namespace

StateEvaluation Model::evaluate(double t, const VectorField& v, const VectorField& d) const {
  const Grid& g = v.grid();
  StateEvaluation ev;
  ev.grad_v = ops_.grad(v);
  ev.grad_d = ops_.grad(d);
  auto el = elastic_parts(ops_, d, ev.grad_d, et_);
  ev.q = std::move(el.q);
  ev.e = VectorField(g);
  MatrixField TL(g);
  VectorField X(g);
  for (std::size_t c = 0; c < g.size(); ++c) {
    ev.e[c] = corotational_rate_from_q(d[c], ev.grad_v[c], ev.q[c], leslie_.lambda);
    TL[c] = leslie_stress_unchecked(d[c], ev.e[c], ev.grad_v[c], leslie_);
    if (form_ == ElasticForm::force) X[c] = transpose(ev.grad_d[c]) * ev.q[c];
  }
  if (form_ == ElasticForm::stress) {
    MatrixField TE(g);
    for (std::size_t c = 0; c < g.size(); ++c) TE[c] = ericksen_stress(ev.grad_d[c], el.FS[c]);
    X.axpy(-1.0, ops_.div(TE));
  }
  X += ops_.div(TL);
  X -= advection(v, ev.grad_v);
  if (forcing_.velocity) {
    ev.g = forcing_.velocity(g, t);
    X += ev.g;
  }
  ev.rhs_v = ops_.project_divfree(X, &ev.pressure);

  ev.rhs_d = VectorField(g);
  for (std::size_t c = 0; c < g.size(); ++c)
    ev.rhs_d[c] = -(ev.grad_d[c] * v[c]) + skw(ev.grad_v[c]) * d[c] + ev.e[c];
  if (forcing_.director) {
    ev.s_d = forcing_.director(g, t);
    ev.rhs_d += ev.s_d;
  }
  return ev;
}

VectorField Model::director_rhs(const VectorField& v, const VectorField& d) const {
  const MatrixField gv = ops_.grad(v);
  const MatrixField gd = ops_.grad(d);
  const VectorField q = elastic_parts(ops_, d, gd, et_).q;
  VectorField r(d.grid());
  for (std::size_t c = 0; c < d.size(); ++c)
    r[c] = -(gd[c] * v[c]) + skw(gv[c]) * d[c] +
           corotational_rate_from_q(d[c], gv[c], q[c], leslie_.lambda);
  return r;
}

VectorField Model::velocity_rhs(double t, const VectorField& v, const VectorField& d,
                                ScalarField* pressure) const {
  StateEvaluation ev = evaluate(t, v, d);
  if (pressure) *pressure = ev.pressure;
  return ev.rhs_v;
}

// ---- stepping --------------------------------------------------------------

double cfl_limit(const Model& m, const SolverConfig& cfg, const VectorField& v) {
  const Grid& g = v.grid();
  const double h = g.min_spacing();
  const double h_eff = m.ops().backend() == Backend::spectral ? h / M_PI : h;
  const double vmax = linf(v);
  const double adv = vmax > 0.0 ? h / vmax : std::numeric_limits<double>::infinity();
  double stiff = m.viscous_stiffness();
  if (cfg.scheme == Scheme::rk2)
    stiff = std::max(stiff, m.elastic_stiffness());
  else
    stiff = std::max(stiff, m.tensors().theta_max_eigenvalue());
  const double diff = stiff > 0.0 ? h_eff * h_eff / stiff : std::numeric_limits<double>::infinity();
  return cfg.cfl * std::min(adv, diff);
}

namespace {

bool all_finite(const VectorField& f) {
  for (std::size_t c = 0; c < f.size(); ++c)
    for (int a = 0; a < 3; ++a)
      if (!std::isfinite(f[c][a])) return false;
  return true;
}

[[noreturn]] void abort_step(const SimulationState& s, const std::string& what) {
  std::ostringstream os;
  os << "numerical abort at step " << s.steps << " (t = " << s.t << "): " << what;
  throw NumericalAbort(os.str());
}

VectorField lambda_laplacian(const Operators& ops, const VectorField& d, const MatrixField& gd,
                             const ElasticTensors& et) {
  MatrixField flux(d.grid());
  for (std::size_t c = 0; c < d.size(); ++c) flux[c] = et.lambda_apply(gd[c]);
  return ops.div(flux);
}

}  // namespace

SimulationState step(const Model& m, const SimulationState& s, const SolverConfig& cfg,
                     const StateEvaluation* eval, StepReport* report) {
  const double dt = cfg.dt;
  std::unique_ptr<StateEvaluation> own;
  if (!eval) {
    own = std::make_unique<StateEvaluation>(m.evaluate(s.t, s.v, s.d));
    eval = own.get();
  }
  if (!all_finite(eval->rhs_v) || !all_finite(eval->rhs_d)) abort_step(s, "non-finite right-hand side");
  const double limit = cfl_limit(m, cfg, s.v);
  if (dt > limit) {
    std::ostringstream os;
    os << "CFL violation: dt = " << dt << " exceeds limit " << limit;
    abort_step(s, os.str());
  }
  const bool stage_renorm = cfg.renormalize_every == 1;
  const bool final_renorm = (s.steps + 1) % cfg.renormalize_every == 0;

  SimulationState out;
  out.t = s.t + dt;
  out.steps = s.steps + 1;
  if (cfg.scheme == Scheme::rk2) {
    VectorField v1 = s.v, d1 = s.d;
    v1.axpy(dt, eval->rhs_v);
    d1.axpy(dt, eval->rhs_d);
    if (stage_renorm) renormalize(d1);
    StateEvaluation e1 = m.evaluate(s.t + dt, v1, d1);
    out.v = s.v;
    out.v.axpy(0.5 * dt, eval->rhs_v).axpy(0.5 * dt, e1.rhs_v);
    out.d = s.d;
    out.d.axpy(0.5 * dt, eval->rhs_d).axpy(0.5 * dt, e1.rhs_d);
    out.p = 0.5 * (eval->pressure + e1.pressure);
  } else {
    out.v = s.v;
    out.v.axpy(dt, eval->rhs_v);
    out.p = eval->pressure;
    const ElasticTensors& et = m.tensors();
    VectorField rhs = s.d;
    rhs.axpy(dt, eval->rhs_d);
    rhs.axpy(-dt, lambda_laplacian(m.ops(), s.d, eval->grad_d, et));
    const double k1 = et.k1(), k2 = et.k2();
    out.d = m.ops().apply_mode_matrix(rhs, [&](const Vec3& xi) {
      const double x2 = norm2(xi);
      const double a = 1.0 + dt * k2 * x2;
      const double b = dt * (k1 - k2);
      Mat3 M = (1.0 / a) * Mat3::identity();
      M -= (b / (a * (a + b * x2))) * outer(xi, xi);
      return M;
    });
  }
  if (report) report->unit_drift_before_renormalize = unit_drift(out.d);
  if (final_renorm) renormalize(out.d);
  if (!all_finite(out.v) || !all_finite(out.d)) abort_step(s, "non-finite state after update");
  if (report) report->div_v = linf(m.ops().div(out.v));
  return out;
}

EnergyTerms energy_terms(const Model& m, const SimulationState& s, const StateEvaluation& ev) {
  const Grid& g = s.v.grid();
  const double vol = g.cell_volume();
  EnergyTerms t{0, 0, 0, 0, 0};
  for (std::size_t c = 0; c < g.size(); ++c) {
    const Mat3 D = sym(ev.grad_v[c]);
    t.kinetic += 0.5 * norm2(s.v[c]);
    t.frank += energy_density(s.d[c], ev.grad_d[c], m.tensors());
    t.dissipation += dissipation_density(s.d[c], D, ev.q[c], m.leslie());
    t.cross += cross_term(s.d[c], D, ev.q[c], m.leslie());
    if (ev.g.size()) t.power += dot(ev.g[c], s.v[c]);
    if (ev.s_d.size()) t.power += dot(ev.q[c], ev.s_d[c]);
  }
  t.kinetic *= vol;
  t.frank *= vol;
  t.dissipation *= vol;
  t.cross *= vol;
  t.power *= vol;
  return t;
}

Trajectory run(const Scenario& sc, const SolverConfig& cfg,
               const std::function<void(const SimulationState&, const MonitorSample&)>& hook) {
  sc.validate(cfg.unit_tol);
  Model m(sc, cfg.backend);
  SimulationState s0;
  s0.v = m.ops().project_divfree(sc.v0);
  s0.d = sc.d0;
  s0.p = ScalarField(sc.grid);
  return run(m, std::move(s0), cfg, hook);
}

Trajectory run(const Model& m, SimulationState s, const SolverConfig& cfg,
               const std::function<void(const SimulationState&, const MonitorSample&)>& hook) {
  cfg.validate();
  const double limit = cfl_limit(m, cfg, s.v);
  if (cfg.dt > limit) {
    std::ostringstream os;
    os << "solver.dt = " << cfg.dt << " violates the CFL limit " << limit;
    throw ValidationError(os.str());
  }
  const long nsteps = std::lround(std::ceil(cfg.t_end / cfg.dt - 1e-9));
  const double t0 = s.t;

  Trajectory tr;
  EnergyTerms prev{};
  double prev_t = s.t;
  double interval_residual = 0.0;
  for (long k = 0;; ++k) {
    StateEvaluation ev = m.evaluate(s.t, s.v, s.d);
    EnergyTerms cur = energy_terms(m, s, ev);
    if (k > 0) {
      const double dt_prev = s.t - prev_t;
      const double rate_prev = prev.dissipation - prev.cross - prev.power;
      const double rate_cur = cur.dissipation - cur.cross - cur.power;
      const double r = (cur.kinetic + cur.frank) - (prev.kinetic + prev.frank) +
                       0.5 * dt_prev * (rate_prev + rate_cur);
      tr.step_residuals.push_back(r);
      interval_residual += r;
      tr.cumulative_dissipation +=
          0.5 * dt_prev * ((prev.dissipation - prev.cross) + (cur.dissipation - cur.cross));
    }
    const bool last = k >= nsteps;
    if (k % cfg.cadence == 0 || last) {
      MonitorSample ms;
      ms.t = s.t;
      ms.kinetic = cur.kinetic;
      ms.frank = cur.frank;
      ms.total = cur.kinetic + cur.frank;
      ms.dissipation = cur.dissipation;
      ms.cross = cur.cross;
      ms.power = cur.power;
      ms.energy_residual = interval_residual;
      ms.div_v = linf(m.ops().div(s.v));
      ms.unit_drift = unit_drift(s.d);
      interval_residual = 0.0;
      if (s.p.size() == 0) s.p = ev.pressure;
      tr.states.push_back(s);
      tr.monitor.push_back(ms);
      if (hook) hook(s, ms);
    }
    if (last) break;
    prev = cur;
    prev_t = s.t;
    SolverConfig c = cfg;
    const double remaining = (t0 + cfg.t_end) - s.t;
    if (remaining < cfg.dt) c.dt = remaining;
    s = step(m, s, c, c.dt == cfg.dt ? &ev : nullptr);
    if (k + 1 == nsteps) s.t = t0 + cfg.t_end;
  }
  return tr;
}

// ---- manufactured solutions ------------------------------------------------

Vec3 Manufactured::velocity(const Vec3& x, double t) const {
  const double a = A * std::cos(t);
  return {{a * std::sin(x[0]) * std::cos(x[1]), -a * std::cos(x[0]) * std::sin(x[1]), 0.0}};
}

Vec3 Manufactured::velocity_dt(const Vec3& x, double t) const {
  const double a = -A * std::sin(t);
  return {{a * std::sin(x[0]) * std::cos(x[1]), -a * std::cos(x[0]) * std::sin(x[1]), 0.0}};
}

Vec3 Manufactured::director(const Vec3& x, double t) const {
  const double th = theta0 + B * std::sin(x[0]) * std::cos(x[1] - t);
  const double ph = C * std::cos(x[0] + t);
  return {{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)}};
}

Vec3 Manufactured::director_dt(const Vec3& x, double t) const {
  const double th = theta0 + B * std::sin(x[0]) * std::cos(x[1] - t);
  const double ph = C * std::cos(x[0] + t);
  const double th_t = B * std::sin(x[0]) * std::sin(x[1] - t);
  const double ph_t = -C * std::sin(x[0] + t);
  const Vec3 d_th{{std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph), -std::sin(th)}};
  const Vec3 d_ph{{-std::sin(th) * std::sin(ph), std::sin(th) * std::cos(ph), 0.0}};
  return th_t * d_th + ph_t * d_ph;
}

namespace {

struct SourceCache {
  std::unique_ptr<Model> model;
  Manufactured ms;
  double t = std::numeric_limits<double>::quiet_NaN();
  VectorField g, s_d;

  void update(double time) {
    if (time == t) return;
    const Grid& fine = model->ops().grid();
    VectorField v = sample(fine, [&](const Vec3& x) { return ms.velocity(x, time); });
    VectorField d = sample(fine, [&](const Vec3& x) { return ms.director(x, time); });
    StateEvaluation ev = model->evaluate(time, v, d);
    g = sample(fine, [&](const Vec3& x) { return ms.velocity_dt(x, time); });
    g -= ev.rhs_v;
    s_d = sample(fine, [&](const Vec3& x) { return ms.director_dt(x, time); });
    s_d -= ev.rhs_d;
    t = time;
  }

  VectorField restrict_to(const VectorField& f, const Grid& coarse) const {
    const Grid& fine = f.grid();
    if (fine == coarse) return f;
    VectorField out(coarse);
    int r[3];
    for (int a = 0; a < 3; ++a) {
      if (fine.n[a] % coarse.n[a] != 0)
        throw ValidationError("manufactured reference grid must be a multiple of the run grid");
      r[a] = fine.n[a] / coarse.n[a];
    }
    for (int k = 0; k < coarse.n[2]; ++k)
      for (int j = 0; j < coarse.n[1]; ++j)
        for (int i = 0; i < coarse.n[0]; ++i)
          out[coarse.index(i, j, k)] = f[fine.index(i * r[0], j * r[1], k * r[2])];
    return out;
  }
};

}  // namespace

Forcing manufactured_forcing(const Manufactured& ms, const Scenario& base, Backend backend,
                             int reference_n) {
  Scenario src = base;
  src.forcing = {};
  Backend b = backend;
  if (reference_n > 0) {
    src.grid.n = {reference_n, reference_n, base.grid.n[2] == 1 ? 1 : reference_n};
    b = Backend::spectral;
  }
  auto cache = std::make_shared<SourceCache>();
  cache->model = std::make_unique<Model>(src, b);
  cache->ms = ms;
  Forcing f;
  f.velocity = [cache](const Grid& g, double t) {
    cache->update(t);
    return cache->restrict_to(cache->g, g);
  };
  f.director = [cache](const Grid& g, double t) {
    cache->update(t);
    return cache->restrict_to(cache->s_d, g);
  };
  return f;
}

namespace {

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceLevel manufactured_run(const Manufactured& ms, const Scenario& base, int n,
                                  double dt, double t_end, Scheme scheme, Backend backend,
                                  int reference_n) {
  Scenario sc = base;
  sc.grid = Grid::cube(n, 2 * M_PI, 2);
  sc.v0 = sample(sc.grid, [&](const Vec3& x) { return ms.velocity(x, 0.0); });
  sc.d0 = sample(sc.grid, [&](const Vec3& x) { return ms.director(x, 0.0); });
  sc.forcing = manufactured_forcing(ms, sc, backend, reference_n);
  SolverConfig cfg;
  cfg.dt = dt;
  cfg.t_end = t_end;
  cfg.scheme = scheme;
  cfg.backend = backend;
  cfg.cadence = std::numeric_limits<int>::max();
  Trajectory tr = run(sc, cfg);
  const SimulationState& s = tr.states.back();
  VectorField ve = s.v - sample(sc.grid, [&](const Vec3& x) { return ms.velocity(x, s.t); });
  VectorField de = s.d - sample(sc.grid, [&](const Vec3& x) { return ms.director(x, s.t); });
  return {n, dt, l2(ve), l2(de)};
}

}  // namespace

ConvergenceReport run_convergence(const Manufactured& ms, const Scenario& base,
                                  const ConvergenceSettings& set) {
  ConvergenceReport rep;
  std::vector<double> xs, ys;
  for (double dt : set.dts) {
    auto lvl = manufactured_run(ms, base, set.temporal_n, dt, set.t_end, set.scheme, set.backend, 0);
    rep.temporal.push_back(lvl);
    xs.push_back(dt);
    ys.push_back(lvl.error_v + lvl.error_d);
  }
  if (xs.size() >= 2) rep.temporal_order = fitted_slope(xs, ys);
  xs.clear();
  ys.clear();
  for (int n : set.spatial_ns) {
    auto lvl = manufactured_run(ms, base, n, set.spatial_dt, set.t_end, set.scheme, set.backend,
                                set.reference_n);
    rep.spatial.push_back(lvl);
    xs.push_back(2 * M_PI / n);
    ys.push_back(lvl.error_v + lvl.error_d);
  }
  if (xs.size() >= 2) rep.spatial_order = fitted_slope(xs, ys);
  return rep;
}

}  // namespace nematic
