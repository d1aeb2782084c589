#include "nematic/verify.hpp"

#include <algorithm>
#include <random>

#include "nematic/fields.hpp"
#include "nematic/leslie.hpp"
#include "nematic/oseen_frank.hpp"

namespace nematic {

bool VerifyReport::pass() const {
  return std::all_of(properties.begin(), properties.end(), [](const auto& p) { return p.pass(); });
}

std::map<std::string, GroupCount> VerifyReport::groups() const {
  std::map<std::string, GroupCount> out;
  for (const auto& p : properties) {
    GroupCount& g = out[p.group];
    ++g.properties;
    g.passed += p.pass();
    g.checks += p.checks;
  }
  return out;
}

std::vector<std::string> VerifyReport::failed() const {
  std::vector<std::string> out;
  for (const auto& p : properties)
    if (!p.pass()) out.push_back(p.group + "/" + p.name);
  return out;
}

namespace {

struct Sampler {
  std::mt19937_64 gen;
  std::uniform_real_distribution<double> uni{-1.0, 1.0};
  explicit Sampler(std::uint64_t s) : gen(s) {}
  double scalar() { return uni(gen); }
  double positive() { return 0.1 + 0.95 * (uni(gen) + 1.0); }
  Vec3 vec() { return {{scalar(), scalar(), scalar()}}; }
  Vec3 unit() {
    Vec3 v;
    do v = vec();
    while (norm(v) < 1e-3);
    return v * (1.0 / norm(v));
  }
  Mat3 mat() {
    Mat3 m;
    for (double& x : m.a) x = scalar();
    return m;
  }
  Tensor3 t3() {
    Tensor3 t;
    for (double& x : t.a) x = scalar();
    return t;
  }
};

class Recorder {
 public:
  Recorder(std::string group, std::string name, double tol) {
    r_.group = std::move(group);
    r_.name = std::move(name);
    r_.tolerance = tol;
  }
  void check(double err) {
    ++r_.checks;
    r_.max_error = std::max(r_.max_error, err);
    if (!(err <= r_.tolerance)) ++r_.failures;
  }
  PropertyResult done() const { return r_; }

 private:
  PropertyResult r_;
};

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

double theta_entry(const ElasticTensors& et, std::size_t i, std::size_t j, std::size_t k,
                   std::size_t l, std::size_t m, std::size_t n) {
  auto d = kronecker;
  const double t1 = d(i, j) * d(l, m) * d(k, n);
  const double tlc = levi_civita(k, j, i) * levi_civita(n, m, l);
  const double tb = d(i, l) * d(m, n) * d(j, k) - d(m, i) * d(l, n) * d(j, k) -
                    d(l, j) * d(m, n) * d(i, k) + d(j, m) * d(l, n) * d(i, k);
  return et.k3() * t1 + et.k4() * tlc + et.k5() * tb;
}

double theta_oracle(const ElasticTensors& et, const Tensor3& G, const Tensor3& H) {
  double s = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t l = 0; l < 3; ++l)
          for (std::size_t m = 0; m < 3; ++m)
            for (std::size_t n = 0; n < 3; ++n)
              s += G(i, j, k) * theta_entry(et, i, j, k, l, m, n) * H(l, m, n);
  return s;
}

Mat3 lambda_oracle(const ElasticTensors& et, const Mat3& A) {
  auto d = kronecker;
  Mat3 out;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t l = 0; l < 3; ++l)
          out(i, j) += (et.k1() * d(i, j) * d(k, l) + et.k2() * (d(i, k) * d(j, l) - d(i, l) * d(j, k))) *
                       A(k, l);
  return out;
}

PropertyResult levi_civita_product() {
  Recorder r("tensor_kernel", "levi_civita_product_identity", 0.0);
  auto d = kronecker;
  for (std::size_t t = 0; t < 729; ++t) {
    const std::size_t i = t / 243, j = t / 81 % 3, k = t / 27 % 3, l = t / 9 % 3, m = t / 3 % 3,
                      n = t % 3;
    const double lhs = levi_civita(i, j, k) * levi_civita(l, m, n);
    const double rhs = d(i, l) * (d(j, m) * d(k, n) - d(j, n) * d(k, m)) -
                       d(i, m) * (d(j, l) * d(k, n) - d(j, n) * d(k, l)) +
                       d(i, n) * (d(j, l) * d(k, m) - d(j, m) * d(k, l));
    r.check(std::abs(lhs - rhs));
  }
  return r.done();
}

}  // namespace

VerifyReport run_verify(const VerifyOptions& opt) {
  VerifyReport rep;
  Sampler rng(opt.seed);
  auto tensors = [&](double k1, double k2, double k3, double k4, double k5) {
    ElasticTensors et(k1, k2, k3, k4, k5);
    et.inject_levi_civita_sign_flip(opt.inject_levi_civita_flip);
    return et;
  };
  auto from_frank = [&](const FrankConstants& f) { return tensors(f.k1, f.k2, f.k3, f.k4, f.k5); };
  auto random_tensors = [&] {
    return tensors(rng.positive(), rng.positive(), rng.positive(), rng.positive(), rng.positive());
  };

  rep.properties.push_back(levi_civita_product());
  {
    Recorder r("tensor_kernel", "lambda_contraction", 1e-12);
    for (int n = 0; n < 500; ++n) {
      const ElasticTensors et = random_tensors();
      const Mat3 A = rng.mat(), B = rng.mat();
      const Mat3 o = lambda_oracle(et, A);
      r.check(std::sqrt(norm2(et.lambda_apply(A) - o)));
      r.check(std::abs(et.lambda_quadratic(B, A) - ddot(B, o)));
    }
    rep.properties.push_back(r.done());
  }
  {
    Recorder r("tensor_kernel", "theta_levi_civita_identity", 1e-12);
    const ElasticTensors et = tensors(0, 0, 0, 1, 0);
    const ElasticTensors ref(0, 0, 0, 1, 0);
    for (int n = 0; n < 500; ++n) {
      const Tensor3 G = rng.t3(), H = rng.t3();
      r.check(std::abs(et.theta_quadratic(G, H) - theta_oracle(ref, G, H)));
      r.check(std::abs(t3_dot_t3(G, et.theta_apply(H)) - theta_oracle(ref, G, H)));
    }
    rep.properties.push_back(r.done());
  }
  {
    Recorder r("tensor_kernel", "theta_contraction", 1e-12);
    for (int n = 0; n < 500; ++n) {
      const ElasticTensors et = random_tensors();
      const ElasticTensors ref(et.k1(), et.k2(), et.k3(), et.k4(), et.k5());
      const Tensor3 G = rng.t3(), H = rng.t3();
      r.check(std::abs(et.theta_quadratic(G, H) - theta_oracle(ref, G, H)));
    }
    rep.properties.push_back(r.done());
  }
  {
    Recorder r("oseen_frank", "energy_forms", 1e-12);
    for (int n = 0; n < 200; ++n) {
      const FrankConstants f = FrankConstants::from_K(rng.positive(), rng.positive(), rng.positive());
      const ElasticTensors et = from_frank(f);
      const Vec3 h = rng.unit();
      const Mat3 S = rng.mat();
      const double k = energy_density_k(h, S, et);
      r.check(rel(energy_density_K(h, S, f), k));
      r.check(rel(energy_density_tensor(h, S, et), k));
    }
    rep.properties.push_back(r.done());
  }
  {
    Recorder r("oseen_frank", "frank_derivatives", 1e-6);
    const double step = 1e-5;
    for (int n = 0; n < 200; ++n) {
      const ElasticTensors et = random_tensors();
      const Vec3 h = rng.vec();
      const Mat3 S = rng.mat();
      Mat3 fd_S;
      Vec3 fd_h;
      for (int i = 0; i < 9; ++i) {
        Mat3 p = S, m = S;
        p.a[i] += step;
        m.a[i] -= step;
        fd_S.a[i] = (energy_density_tensor(h, p, et) - energy_density_tensor(h, m, et)) / (2 * step);
      }
      for (int i = 0; i < 3; ++i) {
        Vec3 p = h, m = h;
        p[i] += step;
        m[i] -= step;
        fd_h[i] = (energy_density_tensor(p, S, et) - energy_density_tensor(m, S, et)) / (2 * step);
      }
      const Mat3 fs = F_S(h, S, et);
      const Vec3 fh = F_h(h, S, et);
      r.check(std::sqrt(norm2(fs - fd_S)) / std::max(1e-8, norm(fs)));
      r.check(norm(fh - fd_h) / std::max(1e-8, norm(fh)));
    }
    rep.properties.push_back(r.done());
  }
  {
    Recorder r("oseen_frank", "ellipticity_form", 1e-12);
    for (int n = 0; n < 200; ++n) {
      const ElasticTensors et = random_tensors();
      const Vec3 a = rng.vec(), b = rng.vec();
      const Mat3 ab = outer(a, b);
      r.check(rel(ellipticity_form(a, b, et), et.lambda_quadratic(ab, ab)));
    }
    rep.properties.push_back(r.done());
  }
  {
    Recorder r("leslie", "dissipation_balance", 1e-12);
    Recorder parodi("leslie", "parodi_cross_term", 1e-15);
    int drawn = 0;
    while (drawn < 500) {
      LeslieCoefficients c{rng.positive(), rng.scalar(), rng.scalar(), rng.positive(),
                           rng.positive(), rng.positive(), rng.scalar()};
      const bool is_parodi = drawn % 3 == 0;
      if (is_parodi) c.lambda = c.mu2 + c.mu3;
      if (!validate_dissipativity(c).empty()) continue;
      ++drawn;
      const DissipationBalance b = dissipation_balance(rng.unit(), rng.mat(), rng.vec(), c);
      r.check(rel(b.lhs(), b.rhs()));
      if (is_parodi) parodi.check(std::abs(b.cross));
    }
    rep.properties.push_back(r.done());
    rep.properties.push_back(parodi.done());
  }
  {
    const Grid g = Grid::cube(16, 2 * M_PI, 3);
    const Operators ops(g, Backend::spectral);
    Recorder korn("fields", "korn_identity", 1e-10);
    Recorder proj("fields", "projection_divergence_free", 1e-11);
    for (std::uint64_t s = 0; s < 5; ++s) {
      const VectorField v = ops.project_divfree(band_limited_random(g, 5, 0.01, opt.seed + 30 + s));
      const MatrixField G = ops.grad(v);
      const double sy = l2(map(G, [](const Mat3& A) { return sym(A); }));
      const double sk = l2(map(G, [](const Mat3& A) { return skw(A); }));
      korn.check(std::abs(sy - sk) / sy);
      proj.check(linf(ops.div(v)) / std::max(1e-300, linf(G)));
    }
    rep.properties.push_back(korn.done());
    rep.properties.push_back(proj.done());

    Recorder q("fields", "variational_derivative", 1e-4);
    const ElasticTensors et = from_frank(FrankConstants::from_K(1.0, 0.7, 1.4));
    VectorField d = band_limited_random(g, 2, 0.3, opt.seed + 50);
    for (std::size_t c = 0; c < d.size(); ++c) d[c][2] += 1.0;
    renormalize(d);
    const VectorField qd = variational_q(ops, d, et);
    for (std::uint64_t s = 0; s < 3; ++s) {
      VectorField psi = band_limited_random(g, 3, 0.05, opt.seed + 52 + s);
      const double eps = 1e-5;
      VectorField dp = d, dm = d;
      dp.axpy(eps, psi);
      dm.axpy(-eps, psi);
      const double fd = (frank_energy(ops, dp, et) - frank_energy(ops, dm, et)) / (2 * eps);
      const double an = inner(qd, psi);
      q.check(std::abs(fd - an) / std::abs(an));
    }
    rep.properties.push_back(q.done());
  }
  return rep;
}

}  // namespace nematic
