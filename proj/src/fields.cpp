#include "nematic/fields.hpp"

#include <fftw3.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

namespace nematic {

// ---- grid ------------------------------------------------------------------

Grid Grid::cube(int n, double L, int dim) {
  if (dim != 2 && dim != 3) throw ValidationError("grid.dim must be 2 or 3");
  Grid g;
  g.n = {n, n, dim == 2 ? 1 : n};
  g.L = {L, L, L};
  g.validate();
  return g;
}

void Grid::validate() const {
  for (int a = 0; a < 3; ++a) {
    const bool collapsed = a == 2 && n[a] == 1;
    if (!collapsed && n[a] < 4) {
      throw ValidationError("grid needs at least 4 cells per axis (axis " + std::to_string(a) +
                            " has " + std::to_string(n[a]) + ")");
    }
    if (!(L[a] > 0.0)) throw ValidationError("grid box length must be positive");
  }
}

double Grid::min_spacing() const {
  double h = std::min(spacing(0), spacing(1));
  if (n[2] > 1) h = std::min(h, spacing(2));
  return h;
}

double Grid::cell_volume() const { return spacing(0) * spacing(1) * spacing(2); }

Vec3 Grid::position(std::size_t flat) const {
  const std::size_t i = flat % n[0];
  const std::size_t j = (flat / n[0]) % n[1];
  const std::size_t k = flat / (std::size_t(n[0]) * n[1]);
  return {{double(i) * spacing(0), double(j) * spacing(1), double(k) * spacing(2)}};
}

ScalarField component(const VectorField& v, int i) {
  ScalarField f(v.grid());
  for (std::size_t c = 0; c < v.size(); ++c) f[c] = v[c][i];
  return f;
}

void set_component(VectorField& v, int i, const ScalarField& f) {
  for (std::size_t c = 0; c < v.size(); ++c) v[c][i] = f[c];
}

Backend parse_backend(const std::string& s) {
  if (s == "spectral") return Backend::spectral;
  if (s == "central") return Backend::central;
  throw ValidationError("unknown backend '" + s + "' (expected spectral or central)");
}

std::string to_string(Backend b) { return b == Backend::spectral ? "spectral" : "central"; }

// ---- transforms ------------------------------------------------------------

namespace {

struct FftBuffer {
  fftw_complex* data = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  explicit FftBuffer(const Grid& g) {
    data = fftw_alloc_complex(g.size());
    fwd = fftw_plan_dft_3d(g.n[2], g.n[1], g.n[0], data, data, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_3d(g.n[2], g.n[1], g.n[0], data, data, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~FftBuffer() {
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(data);
  }
  FftBuffer(const FftBuffer&) = delete;
  FftBuffer& operator=(const FftBuffer&) = delete;
};

int signed_mode(int idx, int n) { return idx <= n / 2 ? idx : idx - n; }

}  // namespace

struct Operators::FftPlans {
  explicit FftPlans(const Grid& g) : buf(g) {}
  FftBuffer buf;
};

Operators::Operators(const Grid& g, Backend b) : grid_(g), backend_(b) {
  grid_.validate();
  fft_ = std::make_unique<FftPlans>(grid_);
  xi_.resize(grid_.size());
  for (std::size_t flat = 0; flat < grid_.size(); ++flat) {
    const int idx[3] = {int(flat % grid_.n[0]), int((flat / grid_.n[0]) % grid_.n[1]),
                        int(flat / (std::size_t(grid_.n[0]) * grid_.n[1]))};
    Vec3 xi;
    for (int a = 0; a < 3; ++a) {
      const int n = grid_.n[a];
      const int m = signed_mode(idx[a], n);
      const double k = 2.0 * M_PI * m / grid_.L[a];
      if (n == 1) {
        xi[a] = 0.0;
      } else if (backend_ == Backend::spectral) {
        xi[a] = (n % 2 == 0 && idx[a] == n / 2) ? 0.0 : k;
      } else {
        const double h = grid_.spacing(a);
        xi[a] = (n % 2 == 0 && idx[a] == n / 2) ? 0.0 : std::sin(k * h) / h;
      }
    }
    xi_[flat] = xi;
  }
}

Operators::~Operators() = default;

void Operators::forward(const ScalarField& f, std::vector<cplx>& out) const {
  auto* buf = fft_->buf.data;
  const std::size_t N = grid_.size();
  for (std::size_t c = 0; c < N; ++c) {
    buf[c][0] = f[c];
    buf[c][1] = 0.0;
  }
  fftw_execute(fft_->buf.fwd);
  out.resize(N);
  for (std::size_t c = 0; c < N; ++c) out[c] = {buf[c][0], buf[c][1]};
}

ScalarField Operators::inverse(const std::vector<cplx>& in) const {
  auto* buf = fft_->buf.data;
  const std::size_t N = grid_.size();
  for (std::size_t c = 0; c < N; ++c) {
    buf[c][0] = in[c].real();
    buf[c][1] = in[c].imag();
  }
  fftw_execute(fft_->buf.bwd);
  ScalarField f(grid_);
  const double scale = 1.0 / double(N);
  for (std::size_t c = 0; c < N; ++c) f[c] = buf[c][0] * scale;
  return f;
}

Vec3 Operators::effective_wavenumber(std::size_t flat) const { return xi_[flat]; }

double Operators::max_symbol_squared() const {
  double m = 0.0;
  for (const auto& x : xi_) m = std::max(m, norm2(x));
  return m;
}

ScalarField Operators::central_partial(const ScalarField& f, int axis) const {
  ScalarField r(grid_);
  const int n = grid_.n[axis];
  if (n == 1) return r;
  const double inv2h = 1.0 / (2.0 * grid_.spacing(axis));
  const auto& N = grid_.n;
  for (int k = 0; k < N[2]; ++k)
    for (int j = 0; j < N[1]; ++j)
      for (int i = 0; i < N[0]; ++i) {
        int ip[3] = {i, j, k}, im[3] = {i, j, k};
        ip[axis] = (ip[axis] + 1) % n;
        im[axis] = (im[axis] + n - 1) % n;
        r[grid_.index(i, j, k)] =
            (f[grid_.index(ip[0], ip[1], ip[2])] - f[grid_.index(im[0], im[1], im[2])]) * inv2h;
      }
  return r;
}

ScalarField Operators::partial(const ScalarField& f, int axis) const {
  if (backend_ == Backend::central) return central_partial(f, axis);
  std::vector<cplx> F;
  forward(f, F);
  for (std::size_t c = 0; c < F.size(); ++c) F[c] *= cplx(0.0, xi_[c][axis]);
  return inverse(F);
}

std::array<ScalarField, 3> Operators::gradient_components(const ScalarField& f) const {
  if (backend_ == Backend::central)
    return {central_partial(f, 0), central_partial(f, 1), central_partial(f, 2)};
  std::vector<cplx> F, G(grid_.size());
  forward(f, F);
  std::array<ScalarField, 3> out;
  for (int a = 0; a < 3; ++a) {
    for (std::size_t c = 0; c < F.size(); ++c) G[c] = F[c] * cplx(0.0, xi_[c][a]);
    out[a] = inverse(G);
  }
  return out;
}

VectorField Operators::grad(const ScalarField& f) const {
  auto g = gradient_components(f);
  VectorField r(grid_);
  for (int a = 0; a < 3; ++a) set_component(r, a, g[a]);
  return r;
}

MatrixField Operators::grad(const VectorField& v) const {
  MatrixField r(grid_);
  for (int i = 0; i < 3; ++i) {
    auto g = gradient_components(component(v, i));
    for (int j = 0; j < 3; ++j)
      for (std::size_t c = 0; c < r.size(); ++c) r[c](i, j) = g[j][c];
  }
  return r;
}

ScalarField Operators::div(const VectorField& v) const {
  if (backend_ == Backend::central) {
    ScalarField r = central_partial(component(v, 0), 0);
    r += central_partial(component(v, 1), 1);
    r += central_partial(component(v, 2), 2);
    return r;
  }
  std::vector<cplx> acc(grid_.size()), F;
  for (int a = 0; a < 3; ++a) {
    forward(component(v, a), F);
    for (std::size_t c = 0; c < F.size(); ++c) acc[c] += F[c] * cplx(0.0, xi_[c][a]);
  }
  return inverse(acc);
}

VectorField Operators::div(const MatrixField& A) const {
  VectorField r(grid_);
  for (int i = 0; i < 3; ++i) {
    VectorField row(grid_);
    for (std::size_t c = 0; c < A.size(); ++c) row[c] = {{A[c](i, 0), A[c](i, 1), A[c](i, 2)}};
    set_component(r, i, div(row));
  }
  return r;
}

VectorField Operators::curl(const VectorField& v) const {
  std::array<std::array<ScalarField, 3>, 3> g;  // g[i][j] = ∂_j v_i
  for (int i = 0; i < 3; ++i) g[i] = gradient_components(component(v, i));
  VectorField r(grid_);
  for (std::size_t c = 0; c < r.size(); ++c) {
    r[c][0] = g[2][1][c] - g[1][2][c];
    r[c][1] = g[0][2][c] - g[2][0][c];
    r[c][2] = g[1][0][c] - g[0][1][c];
  }
  return r;
}

ScalarField Operators::laplacian(const ScalarField& f) const {
  if (backend_ == Backend::central) {
    ScalarField r(grid_);
    for (int a = 0; a < 3; ++a) r += central_partial(central_partial(f, a), a);
    return r;
  }
  std::vector<cplx> F;
  forward(f, F);
  for (std::size_t c = 0; c < F.size(); ++c) F[c] *= -norm2(xi_[c]);
  return inverse(F);
}

VectorField Operators::laplacian(const VectorField& v) const {
  VectorField r(grid_);
  for (int i = 0; i < 3; ++i) set_component(r, i, laplacian(component(v, i)));
  return r;
}

VectorField Operators::project_divfree(const VectorField& v, ScalarField* pressure) const {
  const std::size_t N = grid_.size();
  std::array<std::vector<cplx>, 3> F;
  for (int a = 0; a < 3; ++a) forward(component(v, a), F[a]);
  std::vector<cplx> P(N);
  for (std::size_t c = 0; c < N; ++c) {
    const Vec3& x = xi_[c];
    const double x2 = norm2(x);
    if (x2 == 0.0) continue;
    const cplx xf = x[0] * F[0][c] + x[1] * F[1][c] + x[2] * F[2][c];
    for (int a = 0; a < 3; ++a) F[a][c] -= x[a] * xf / x2;
    P[c] = cplx(0.0, -1.0) * xf / x2;
  }
  VectorField r(grid_);
  for (int a = 0; a < 3; ++a) set_component(r, a, inverse(F[a]));
  if (pressure) *pressure = inverse(P);
  return r;
}

VectorField Operators::apply_mode_matrix(const VectorField& r,
                                         const std::function<Mat3(const Vec3&)>& M) const {
  const std::size_t N = grid_.size();
  std::array<std::vector<cplx>, 3> F;
  for (int a = 0; a < 3; ++a) forward(component(r, a), F[a]);
  for (std::size_t c = 0; c < N; ++c) {
    const Mat3 m = M(xi_[c]);
    const cplx in[3] = {F[0][c], F[1][c], F[2][c]};
    for (int i = 0; i < 3; ++i) F[i][c] = m(i, 0) * in[0] + m(i, 1) * in[1] + m(i, 2) * in[2];
  }
  VectorField out(grid_);
  for (int a = 0; a < 3; ++a) set_component(out, a, inverse(F[a]));
  return out;
}

// ---- norms -----------------------------------------------------------------

double integrate(const ScalarField& f) {
  double s = 0.0;
  for (std::size_t c = 0; c < f.size(); ++c) s += f[c];
  return s * f.grid().cell_volume();
}

double inner(const ScalarField& a, const ScalarField& b) {
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) s += a[c] * b[c];
  return s * a.grid().cell_volume();
}

double inner(const VectorField& a, const VectorField& b) {
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) s += dot(a[c], b[c]);
  return s * a.grid().cell_volume();
}

double inner(const MatrixField& a, const MatrixField& b) {
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) s += ddot(a[c], b[c]);
  return s * a.grid().cell_volume();
}

double h1_seminorm(const Operators& ops, const ScalarField& f) { return l2(ops.grad(f)); }
double h1_seminorm(const Operators& ops, const VectorField& v) { return l2(ops.grad(v)); }

double w_kp_norm(const Operators& ops, const VectorField& v, int k, double p) {
  if (k < 0 || k > 2) throw ValidationError("w_kp_norm supports k = 0, 1, 2");
  std::vector<VectorField> terms{v};
  if (k >= 1) {
    std::array<VectorField, 3> first;
    for (int a = 0; a < 3; ++a) first[a] = VectorField(v.grid());
    for (int i = 0; i < 3; ++i) {
      auto g = ops.gradient_components(component(v, i));
      for (int a = 0; a < 3; ++a) set_component(first[a], i, g[a]);
    }
    for (int a = 0; a < 3; ++a) terms.push_back(first[a]);
    if (k == 2) {
      for (int a = 0; a < 3; ++a)
        for (int b = a; b < 3; ++b) {
          VectorField second(v.grid());
          for (int i = 0; i < 3; ++i) set_component(second, i, ops.partial(component(first[a], i), b));
          terms.push_back(std::move(second));
        }
    }
  }
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& t : terms) m = std::max(m, linf(t));
    return m;
  }
  double s = 0.0;
  for (const auto& t : terms) s += std::pow(lp_norm(t, p), p);
  return std::pow(s, 1.0 / p);
}

double unit_drift(const VectorField& d) {
  double m = 0.0;
  for (std::size_t c = 0; c < d.size(); ++c) m = std::max(m, std::abs(norm(d[c]) - 1.0));
  return m;
}

void require_unit(const VectorField& d, double tol, const std::string& where) {
  const double drift = unit_drift(d);
  if (!(drift <= tol)) {
    std::ostringstream os;
    os << where << ": director not unit length (max | |d| - 1 | = " << drift << ", tolerance "
       << tol << ")";
    throw ValidationError(os.str());
  }
}

void renormalize(VectorField& d) {
  for (std::size_t c = 0; c < d.size(); ++c) {
    const double n = norm(d[c]);
    if (n > 0.0) d[c] *= 1.0 / n;
  }
}

VectorField band_limited_random(const Grid& g, int kmax, double amp, std::uint64_t seed) {
  g.validate();
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> uni(-amp, amp);
  FftBuffer buf(g);
  VectorField out(g);
  const int km[3] = {std::min(kmax, (g.n[0] - 1) / 2), std::min(kmax, (g.n[1] - 1) / 2),
                     g.n[2] == 1 ? 0 : std::min(kmax, (g.n[2] - 1) / 2)};
  for (int comp = 0; comp < 3; ++comp) {
    std::memset(buf.data, 0, sizeof(fftw_complex) * g.size());
    for (int mz = -km[2]; mz <= km[2]; ++mz)
      for (int my = -km[1]; my <= km[1]; ++my)
        for (int mx = -km[0]; mx <= km[0]; ++mx) {
          const std::size_t idx = g.index((mx + g.n[0]) % g.n[0], (my + g.n[1]) % g.n[1],
                                          (mz + g.n[2]) % g.n[2]);
          buf.data[idx][0] = uni(gen);
          buf.data[idx][1] = uni(gen);
        }
    fftw_execute(buf.bwd);
    for (std::size_t c = 0; c < g.size(); ++c) out[c][comp] = buf.data[c][0];
  }
  return out;
}

// ---- elastic energy --------------------------------------------------------

ScalarField frank_density(const Operators& ops, const VectorField& d, const ElasticTensors& et) {
  const MatrixField G = ops.grad(d);
  ScalarField f(d.grid());
  for (std::size_t c = 0; c < d.size(); ++c) f[c] = energy_density(d[c], G[c], et);
  return f;
}

double frank_energy(const Operators& ops, const VectorField& d, const ElasticTensors& et) {
  return integrate(frank_density(ops, d, et));
}

VectorField variational_q_unchecked(const Operators& ops, const VectorField& d,
                                    const ElasticTensors& et) {
  const MatrixField G = ops.grad(d);
  MatrixField FS(d.grid());
  VectorField q(d.grid());
  for (std::size_t c = 0; c < d.size(); ++c) {
    FS[c] = F_S(d[c], G[c], et);
    q[c] = F_h(d[c], G[c], et);
  }
  q -= ops.div(FS);
  return q;
}

VectorField variational_q(const Operators& ops, const VectorField& d, const ElasticTensors& et,
                          double unit_tol) {
  require_unit(d, unit_tol, "variational_q");
  return variational_q_unchecked(ops, d, et);
}

VectorField variational_q_expanded(const Operators& ops, const VectorField& d,
                                   const ElasticTensors& et) {
  const Grid& g = d.grid();
  const ScalarField divd = ops.div(d);
  const VectorField curld = ops.curl(d);
  const MatrixField G = ops.grad(d);

  ScalarField div_norm(g);
  MatrixField twist_flux(g), bend_flux(g);
  VectorField local(g);
  for (std::size_t c = 0; c < g.size(); ++c) {
    const Vec3& h = d[c];
    const double twist = dot(h, curld[c]);
    const Mat3 W = skw(G[c]);
    div_norm[c] = divd[c] * norm2(h);
    twist_flux[c] = twist * cross_matrix(h);
    bend_flux[c] = skw(outer(W * h, h));
    local[c] = et.k3() * divd[c] * divd[c] * h + et.k4() * twist * curld[c] +
               4.0 * et.k5() * (transpose(W) * (W * h));
  }
  VectorField q = local;
  q.axpy(-et.k1(), ops.grad(divd));
  q.axpy(et.k2(), ops.curl(curld));
  q.axpy(-et.k3(), ops.grad(div_norm));
  q.axpy(-et.k4(), ops.div(twist_flux));
  q.axpy(-4.0 * et.k5(), ops.div(bend_flux));
  return q;
}

// ---- snapshots -------------------------------------------------------------

namespace {

static_assert(std::endian::native == std::endian::little,
              "snapshot IO assumes a little-endian host");

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw ValidationError("snapshot file truncated");
  return v;
}

}  // namespace

void write_snapshot(const std::string& path, const Snapshot& s) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open snapshot for writing: " + path);
  os.write("NEMF", 4);
  put<std::uint32_t>(os, 1);
  for (int a = 0; a < 3; ++a) put<std::uint32_t>(os, std::uint32_t(s.grid.n[a]));
  for (int a = 0; a < 3; ++a) put<double>(os, s.grid.L[a]);
  put<double>(os, s.time);
  put<std::uint32_t>(os, std::uint32_t(s.ncomp));
  put<std::uint32_t>(os, std::uint32_t(s.name.size()));
  os.write(s.name.data(), std::streamsize(s.name.size()));
  os.write(reinterpret_cast<const char*>(s.data.data()),
           std::streamsize(s.data.size() * sizeof(double)));
  if (!os) throw ValidationError("failed writing snapshot: " + path);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open snapshot: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "NEMF", 4) != 0) throw ValidationError("not a field snapshot: " + path);
  if (get<std::uint32_t>(is) != 1) throw ValidationError("unsupported snapshot version");
  Snapshot s;
  for (int a = 0; a < 3; ++a) s.grid.n[a] = int(get<std::uint32_t>(is));
  for (int a = 0; a < 3; ++a) s.grid.L[a] = get<double>(is);
  s.time = get<double>(is);
  s.ncomp = int(get<std::uint32_t>(is));
  s.name.resize(get<std::uint32_t>(is));
  is.read(s.name.data(), std::streamsize(s.name.size()));
  s.data.resize(s.grid.size() * std::size_t(s.ncomp));
  is.read(reinterpret_cast<char*>(s.data.data()), std::streamsize(s.data.size() * sizeof(double)));
  if (!is) throw ValidationError("snapshot file truncated: " + path);
  return s;
}

Snapshot make_snapshot(const std::string& name, double t, const ScalarField& f) {
  return {f.grid(), t, name, 1, f.values()};
}

Snapshot make_snapshot(const std::string& name, double t, const VectorField& f) {
  Snapshot s{f.grid(), t, name, 3, {}};
  s.data.reserve(f.size() * 3);
  for (std::size_t c = 0; c < f.size(); ++c)
    for (int a = 0; a < 3; ++a) s.data.push_back(f[c][a]);
  return s;
}

VectorField vector_from_snapshot(const Snapshot& s) {
  if (s.ncomp != 3) throw ValidationError("snapshot '" + s.name + "' is not a vector field");
  VectorField v(s.grid);
  for (std::size_t c = 0; c < v.size(); ++c)
    for (int a = 0; a < 3; ++a) v[c][a] = s.data[3 * c + a];
  return v;
}

}  // namespace nematic
