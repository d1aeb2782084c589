#include "nematic/rel_energy.hpp"

#include <limits>

namespace nematic {

EnergyBreakdown total_energy(const Operators& ops, const ElasticTensors& et, const VectorField& v,
                             const VectorField& d, const GeneralizedYoungMeasure* nu,
                             const DefectMeasure* mu) {
  EnergyBreakdown e;
  e.kinetic = 0.5 * inner(v, v);
  if (nu) {
    TestIntegrand F{[&et](const Vec3&, const Vec3& h, const Mat3& S) { return energy_density(h, S, et); },
                    Growth::quadratic, {}};
    e.frank = pairing(*nu, F, d);
  } else {
    e.frank = frank_energy(ops, d, et);
  }
  if (mu) e.defect = 0.5 * mu->total_mass();
  e.total = e.kinetic + e.frank + e.defect;
  return e;
}

EnergyMonitorReport energy_monitor(const std::vector<MonitorSample>& s, double tol) {
  EnergyMonitorReport r;
  for (std::size_t k = 1; k < s.size(); ++k) {
    const double ra = s[k - 1].dissipation - s[k - 1].cross - s[k - 1].power;
    const double rb = s[k].dissipation - s[k].cross - s[k].power;
    const double res = s[k].total - s[k - 1].total + 0.5 * (s[k].t - s[k - 1].t) * (ra + rb);
    r.residual.push_back(res);
    r.max_abs = std::max(r.max_abs, std::abs(res));
    if (res > tol) r.inequality_holds = false;
  }
  return r;
}

namespace {

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw ValidationError("candidate and reference live on different grids");
}

template <class Cell>
double pair_candidate(const Operators& ops, const Candidate& cand, const VectorField& v_ref,
                      const VectorField& d_ref, Cell&& cell) {
  const Grid& g = d_ref.grid();
  require_same_grid(cand.d->grid(), g);
  require_same_grid(cand.v->grid(), g);
  const MatrixField Gr = ops.grad(d_ref);
  GeneralizedYoungMeasure lifted;
  const GeneralizedYoungMeasure* nu = cand.nu;
  if (!nu) {
    lifted = dirac_from_field(ops, *cand.d);
    nu = &lifted;
  }
  require_same_grid(nu->grid, g);
  double s = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    const Mat3& A = Gr[c];
    const Vec3& b = d_ref[c];
    s += cell_pairing(*nu, c, (*cand.d)[c],
                      [&](const Vec3& h, const Mat3& S) { return cell(h, S, A, b); });
  }
  s *= g.cell_volume();
  const VectorField dv = *cand.v - v_ref;
  s += 0.5 * inner(dv, dv);
  if (cand.mu) {
    require_same_grid(cand.mu->grid, g);
    s += 0.5 * cand.mu->total_mass();
  }
  return s;
}

}  // namespace

double relative_energy(const Operators& ops, const ElasticTensors& et, const Candidate& cand,
                       const VectorField& v_ref, const VectorField& d_ref) {
  return pair_candidate(ops, cand, v_ref, d_ref,
                        [&](const Vec3& h, const Mat3& S, const Mat3& A, const Vec3& b) {
                          const Mat3 dS = S - A;
                          const Tensor3 G = outer(S, h) - outer(A, b);
                          return 0.5 * et.lambda_quadratic(dS, dS) + 0.5 * et.theta_quadratic(G, G);
                        });
}

double relative_energy_expanded(const Operators& ops, const ElasticTensors& et,
                                const Candidate& cand, const VectorField& v_ref,
                                const VectorField& d_ref) {
  return pair_candidate(ops, cand, v_ref, d_ref,
                        [&](const Vec3& h, const Mat3& S, const Mat3& A, const Vec3& b) {
                          const Mat3 Ws = skw(S), Wa = skw(A);
                          const double tr = trace(S) - trace(A);
                          const Vec3 splay = trace(S) * h - trace(A) * b;
                          const double twist = ddot(Ws, cross_matrix(h)) - ddot(Wa, cross_matrix(b));
                          const Vec3 bend = Ws * h - Wa * b;
                          return 0.5 * (et.k1() * tr * tr + 2 * et.k2() * norm2(Ws - Wa) +
                                        et.k3() * norm2(splay) + et.k4() * twist * twist +
                                        4 * et.k5() * norm2(bend));
                        });
}

double relative_dissipation(const Operators& ops, const ElasticTensors& et,
                            const LeslieCoefficients& c, const VectorField& v,
                            const VectorField& d, const VectorField& v_ref,
                            const VectorField& d_ref) {
  require_same_grid(v.grid(), v_ref.grid());
  const Grid& g = v.grid();
  const MatrixField G = ops.grad(v), Gr = ops.grad(v_ref);
  const VectorField q = variational_q_unchecked(ops, d, et);
  const VectorField qr = variational_q_unchecked(ops, d_ref, et);
  const double a1 = c.mu1 + c.lambda * c.mu23();
  const double a2 = c.mu56() - c.lambda * c.mu23();
  double s = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Mat3 D = sym(G[k]), Dr = sym(Gr[k]);
    const Vec3 Dd = D * d[k], Drd = Dr * d_ref[k];
    const double s1 = dot(d[k], Dd) - dot(d_ref[k], Drd);
    s += a1 * s1 * s1 + a2 * norm2(Dd - Drd) + c.mu4 * norm2(D - Dr) +
         norm2(cross(d[k], q[k]) - cross(d_ref[k], qr[k]));
  }
  return s * g.cell_volume();
}

double gronwall_weight_unit(const Operators& ops, const VectorField& v_ref,
                            const VectorField& d_ref, const VectorField& dt_d_ref) {
  const double vinf = linf(v_ref);
  const double v13 = w_kp_norm(ops, v_ref, 1, 3.0);
  const double d23 = w_kp_norm(ops, d_ref, 2, 3.0);
  const double d16 = w_kp_norm(ops, d_ref, 1, 6.0);
  const double tinf = linf(dt_d_ref);
  const double t13 = w_kp_norm(ops, dt_d_ref, 1, 3.0);
  const MatrixField G = ops.grad(v_ref);
  double dinf = 0.0;
  for (std::size_t c = 0; c < G.size(); ++c) dinf = std::max(dinf, norm(sym(G[c])));
  return vinf * vinf + v13 * v13 + d23 * d23 + std::pow(d16, 4) + tinf + t13 + dinf + 1.0;
}

double initial_constant_c0(const Operators& ops, const ElasticTensors& et, const Candidate& cand0,
                           const VectorField& v_ref0, const VectorField& d_ref0, double c) {
  const double E0 = relative_energy(ops, et, cand0, v_ref0, d_ref0);
  const MatrixField Gc = cand0.nu ? barycenter(*cand0.nu) : ops.grad(*cand0.d);
  const MatrixField Gr = ops.grad(d_ref0);
  double cross_term = 0.0;
  for (std::size_t k = 0; k < Gr.size(); ++k) {
    const Tensor3 X = outer(Gc[k] - Gr[k], (*cand0.d)[k] - d_ref0[k]);
    cross_term += et.theta_quadratic(X, outer(Gr[k], d_ref0[k]));
  }
  cross_term *= d_ref0.grid().cell_volume();
  const VectorField dd = *cand0.d - d_ref0;
  return E0 + cross_term + c * inner(dd, dd);
}

bool zeta_admissible(const LeslieCoefficients& c, double zeta) {
  const double x = c.mu23() - c.lambda;
  return x * x <= zeta * zeta * 4.0 * (c.mu56() - c.lambda * c.mu23());
}

double minimal_zeta(const LeslieCoefficients& c) {
  const double den = 4.0 * (c.mu56() - c.lambda * c.mu23());
  if (!(den > 0.0)) return std::numeric_limits<double>::infinity();
  return std::abs(c.mu23() - c.lambda) / std::sqrt(den);
}

GronwallReport gronwall_certify(const std::vector<RelativeEnergySample>& s, double c0, double zeta,
                                double abs_tol, double rel_tol) {
  if (!(zeta > 0.0 && zeta < 1.0)) throw ValidationError("zeta must lie in (0, 1)");
  for (std::size_t k = 1; k < s.size(); ++k)
    if (!(s[k].t > s[k - 1].t)) throw ValidationError("relative energy samples are not time-ordered");
  GronwallReport r;
  r.c0 = c0;
  r.zeta = zeta;
  r.pass = true;
  r.worst_margin = std::numeric_limits<double>::infinity();
  double intK = 0.0, intW = 0.0, intKE = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (k > 0) {
      const double h = s[k].t - s[k - 1].t;
      intK += 0.5 * h * (s[k].K + s[k - 1].K);
      intW += 0.5 * h * (s[k].W + s[k - 1].W);
      intKE += 0.5 * h * (s[k].K * s[k].E + s[k - 1].K * s[k - 1].E);
    }
    const double pre = (c0 + zeta * intW + intKE) - (s[k].E + intW);
    const double bound = c0 * std::exp(intK);
    const double m = std::min(pre, bound - s[k].E);
    const double tol = abs_tol + rel_tol * std::max(std::abs(c0), std::abs(s[k].E));
    r.bound.push_back(bound);
    r.margin_pre.push_back(pre);
    r.margin_bound.push_back(bound - s[k].E);
    r.margin.push_back(m);
    r.worst_margin = std::min(r.worst_margin, m);
    r.tolerance = std::max(r.tolerance, tol);
    if (m < -tol && r.pass) {
      r.pass = false;
      r.first_failure = int(k);
    }
  }
  r.integral_K = intK;
  if (s.empty()) r.worst_margin = 0.0;
  return r;
}

}  // namespace nematic
