#pragma once

/// \file
/// Periodic structured grids, grid fields, discrete differential operators
/// (Fourier spectral or second-order central), the Leray projection, discrete
/// norms, the discrete Oseen–Frank functional and its variational derivative.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <type_traits>
#include <vector>

#include "nematic/errors.hpp"
#include "nematic/oseen_frank.hpp"
#include "nematic/tensor.hpp"

namespace nematic {

/// Periodic box [0,L0)×[0,L1)×[0,L2) with n[a] cells per axis. A grid with
/// n[2] == 1 is a 2D-in-3D grid: fields depend on (x0, x1) only but keep three
/// components.
struct Grid {
  std::array<int, 3> n{16, 16, 16};
  std::array<double, 3> L{2 * M_PI, 2 * M_PI, 2 * M_PI};

  /// dim == 2 gives an n×n×1 grid.
  static Grid cube(int n, double L, int dim = 3);

  /// Throws ValidationError unless n ≥ 4 on every active axis and L > 0.
  void validate() const;

  int dim() const { return n[2] == 1 ? 2 : 3; }
  std::size_t size() const { return std::size_t(n[0]) * n[1] * n[2]; }
  double spacing(int axis) const { return L[axis] / n[axis]; }
  double min_spacing() const;
  double cell_volume() const;
  double volume() const { return L[0] * L[1] * L[2]; }
  std::size_t index(int i, int j, int k) const {
    return (std::size_t(k) * n[1] + j) * n[0] + i;
  }
  /// Node coordinates of cell (i, j, k); x_a = idx_a · h_a.
  Vec3 position(std::size_t flat) const;

  friend bool operator==(const Grid&, const Grid&) = default;
};

template <class T>
class Field {
 public:
  Field() = default;
  explicit Field(const Grid& g, const T& value = T{}) : grid_(g), data_(g.size(), value) {}

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return data_.size(); }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }
  std::vector<T>& values() { return data_; }
  const std::vector<T>& values() const { return data_; }

  Field& operator+=(const Field& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Field& operator-=(const Field& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Field& operator*=(double s) {
    for (auto& x : data_) x *= s;
    return *this;
  }
  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(Field a, double s) { return a *= s; }
  friend Field operator*(double s, Field a) { return a *= s; }

  /// this += s·o
  Field& axpy(double s, const Field& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += s * o.data_[i];
    return *this;
  }

 private:
  Grid grid_;
  std::vector<T> data_;
};

using ScalarField = Field<double>;
using VectorField = Field<Vec3>;
using MatrixField = Field<Mat3>;

template <class F>
auto sample(const Grid& g, F&& f) {
  using T = std::decay_t<decltype(f(Vec3{}))>;
  Field<T> out(g);
  for (std::size_t c = 0; c < g.size(); ++c) out[c] = f(g.position(c));
  return out;
}

template <class T, class F>
auto map(const Field<T>& a, F&& f) {
  using R = std::decay_t<decltype(f(a[0]))>;
  Field<R> out(a.grid());
  for (std::size_t c = 0; c < a.size(); ++c) out[c] = f(a[c]);
  return out;
}

ScalarField component(const VectorField& v, int i);
void set_component(VectorField& v, int i, const ScalarField& f);

enum class Backend { spectral, central };
Backend parse_backend(const std::string& s);
std::string to_string(Backend b);

/// Discrete derivative operators on one grid.
///
/// Both backends use a skew-adjoint first-derivative operator D_a per axis;
/// second derivatives are composed from it. Spectral: D_a has Fourier symbol
/// i k_a with the Nyquist mode removed. Central: (f_{i+1} − f_{i−1}) / (2h),
/// symbol i sin(k_a h)/h. The projection and implicit mode solves use the same
/// symbols, so div(project_divfree(v)) vanishes to round-off for either
/// backend.
///
/// Not thread-safe: a single instance owns transform buffers.
class Operators {
 public:
  Operators(const Grid& g, Backend b);
  ~Operators();
  Operators(const Operators&) = delete;
  Operators& operator=(const Operators&) = delete;

  const Grid& grid() const { return grid_; }
  Backend backend() const { return backend_; }

  ScalarField partial(const ScalarField& f, int axis) const;
  std::array<ScalarField, 3> gradient_components(const ScalarField& f) const;

  VectorField grad(const ScalarField& f) const;
  /// (∇v)_ij = ∂_j v_i.
  MatrixField grad(const VectorField& v) const;
  ScalarField div(const VectorField& v) const;
  /// (div A)_i = Σ_j ∂_j A_ij.
  VectorField div(const MatrixField& A) const;
  VectorField curl(const VectorField& v) const;
  ScalarField laplacian(const ScalarField& f) const;
  VectorField laplacian(const VectorField& v) const;

  /// Leray projection; the removed gradient part ∇p is returned through
  /// pressure (zero mean) when requested. The mean is preserved.
  VectorField project_divfree(const VectorField& v, ScalarField* pressure = nullptr) const;

  /// Real effective wavenumber ξ of a flat Fourier index, so that D has
  /// symbol i ξ.
  Vec3 effective_wavenumber(std::size_t flat) const;

  /// Applies x̂(ξ) = M(ξ) r̂(ξ) mode by mode, M real 3×3.
  VectorField apply_mode_matrix(const VectorField& r,
                                const std::function<Mat3(const Vec3& xi)>& M) const;

  /// Largest |ξ|² over all modes (stiffness of the composed Laplacian).
  double max_symbol_squared() const;

 private:
  using cplx = std::complex<double>;
  void forward(const ScalarField& f, std::vector<cplx>& out) const;
  ScalarField inverse(const std::vector<cplx>& in) const;
  ScalarField central_partial(const ScalarField& f, int axis) const;

  Grid grid_;
  Backend backend_;
  std::vector<Vec3> xi_;
  struct FftPlans;
  std::unique_ptr<FftPlans> fft_;
};

// ---- norms and quadrature --------------------------------------------------

double integrate(const ScalarField& f);
double inner(const ScalarField& a, const ScalarField& b);
double inner(const VectorField& a, const VectorField& b);
double inner(const MatrixField& a, const MatrixField& b);

template <class T>
double lp_norm(const Field<T>& f, double p) {
  double s = 0.0;
  for (std::size_t c = 0; c < f.size(); ++c) {
    double a;
    if constexpr (std::is_same_v<T, double>)
      a = std::abs(f[c]);
    else
      a = std::sqrt(norm2(f[c]));
    s += std::pow(a, p);
  }
  return std::pow(s * f.grid().cell_volume(), 1.0 / p);
}
template <class T>
double l2(const Field<T>& f) {
  double s = 0.0;
  for (std::size_t c = 0; c < f.size(); ++c) {
    if constexpr (std::is_same_v<T, double>)
      s += f[c] * f[c];
    else
      s += norm2(f[c]);
  }
  return std::sqrt(s * f.grid().cell_volume());
}
template <class T>
double l6(const Field<T>& f) {
  return lp_norm(f, 6.0);
}
template <class T>
double linf(const Field<T>& f) {
  double m = 0.0;
  for (std::size_t c = 0; c < f.size(); ++c) {
    if constexpr (std::is_same_v<T, double>)
      m = std::max(m, std::abs(f[c]));
    else
      m = std::max(m, std::sqrt(norm2(f[c])));
  }
  return m;
}

double h1_seminorm(const Operators& ops, const ScalarField& f);
double h1_seminorm(const Operators& ops, const VectorField& v);

/// (Σ_{|α| ≤ k} ‖D^α v‖_p^p)^{1/p} for k ≤ 2; p = ∞ takes the maximum.
double w_kp_norm(const Operators& ops, const VectorField& v, int k, double p);

/// Largest | |d| − 1 | over the grid.
double unit_drift(const VectorField& d);
void require_unit(const VectorField& d, double tol, const std::string& where);
void renormalize(VectorField& d);

/// Sum of band-limited Fourier modes with |m_a| ≤ kmax and uniformly random
/// amplitudes in [−amp, amp]; deterministic in seed.
VectorField band_limited_random(const Grid& g, int kmax, double amp, std::uint64_t seed);

// ---- elastic energy on fields ---------------------------------------------

/// 𝔉_h(d) = Σ F(d, ∇d) · cell volume; d need not be unit length.
double frank_energy(const Operators& ops, const VectorField& d, const ElasticTensors& et);
ScalarField frank_density(const Operators& ops, const VectorField& d, const ElasticTensors& et);

/// q = F_h(d, ∇d) − div F_S(d, ∇d), the exact gradient of frank_energy with
/// respect to the discrete L² product. Throws ValidationError if |d| drifts
/// from one by more than unit_tol.
VectorField variational_q(const Operators& ops, const VectorField& d, const ElasticTensors& et,
                          double unit_tol = 1e-10);
VectorField variational_q_unchecked(const Operators& ops, const VectorField& d,
                                    const ElasticTensors& et);
/// The same derivative written with div, curl and gradients of scalars:
/// −k1 ∇div d + k2 curl curl d − k3 ∇(div d |d|²) − k4 div([d]×(d·curl d))
/// − 4k5 div(((∇d)_skw d ⊗ d)_skw) + k3 (div d)² d + k4 (d·curl d) curl d
/// + 4k5 (∇d)_skwᵀ(∇d)_skw d.
VectorField variational_q_expanded(const Operators& ops, const VectorField& d,
                                   const ElasticTensors& et);

// ---- snapshot files --------------------------------------------------------

/// Binary field snapshot, little-endian:
///   char[4] "NEMF", u32 version (1), u32 nx, ny, nz, f64 Lx, Ly, Lz, f64 time,
///   u32 ncomp, u32 name_len, name bytes, then nx·ny·nz·ncomp f64 values with
///   the component index fastest and x fastest among cells.
struct Snapshot {
  Grid grid;
  double time = 0.0;
  std::string name;
  int ncomp = 0;
  std::vector<double> data;
};

void write_snapshot(const std::string& path, const Snapshot& s);
Snapshot read_snapshot(const std::string& path);
Snapshot make_snapshot(const std::string& name, double t, const ScalarField& f);
Snapshot make_snapshot(const std::string& name, double t, const VectorField& f);
VectorField vector_from_snapshot(const Snapshot& s);

}  // namespace nematic
