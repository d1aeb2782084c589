#pragma once

/// \file
/// Atomic generalized Young measures (oscillation, concentration, angle parts)
/// and defect measures on a grid, the recession transform of integrands,
/// dual pairings and residuals of the measure-valued formulation.

#include <functional>
#include <string>
#include <vector>

#include "nematic/fields.hpp"
#include "nematic/leslie.hpp"
#include "nematic/oseen_frank.hpp"

namespace nematic {

struct OscillationAtom {
  double w = 1.0;
  Mat3 S;
};
struct AngleAtom {
  double w = 1.0;
  Vec3 h;  // |h| ≤ 1
  Mat3 S;  // |S| = 1
};
struct DefectAtom {
  double w = 1.0;
  Tensor3 G;  // |Γ| = 1
};

/// Per-cell atom lists. `concentration` is a density: cell c carries the mass
/// concentration[c] · cell volume.
struct GeneralizedYoungMeasure {
  Grid grid;
  std::vector<std::vector<OscillationAtom>> oscillation;
  std::vector<double> concentration;
  std::vector<std::vector<AngleAtom>> angle;

  explicit GeneralizedYoungMeasure(const Grid& g = Grid{})
      : grid(g), oscillation(g.size()), concentration(g.size(), 0.0), angle(g.size()) {}

  /// Throws ValidationError naming the first violated invariant.
  void validate(double tol = 1e-12) const;
  double concentration_mass() const;
};

/// Defect measure: `mass[c]` is the (absolute) mass μ_t of cell c.
struct DefectMeasure {
  Grid grid;
  std::vector<double> mass;
  std::vector<std::vector<DefectAtom>> direction;

  explicit DefectMeasure(const Grid& g = Grid{})
      : grid(g), mass(g.size(), 0.0), direction(g.size()) {}

  void validate(double tol = 1e-12) const;
  /// ⟪μ_t, 1⟫.
  double total_mass() const;
};

/// Spreads a total mass uniformly over all cells with the single direction Γ
/// (normalised).
DefectMeasure uniform_defect(const Grid& g, double total_mass, const Tensor3& G);

enum class Growth { quadratic, general };

/// f(x, h, S). For Growth::quadratic f must be a polynomial of degree at most
/// two in h and at most two in S; its transform then extends continuously and
/// is evaluated in closed form everywhere. For Growth::general the transform is
/// evaluated directly in the open balls and through `extension` on their
/// boundary.
struct TestIntegrand {
  std::function<double(const Vec3& x, const Vec3& h, const Mat3& S)> f;
  Growth growth = Growth::quadratic;
  std::function<double(const Vec3& x, const Vec3& h, const Mat3& S)> extension;
};

/// Coefficients g_pq of s^p t^q in g(s, t) = f(s h, t S) for a bidegree
/// (2, 2) polynomial f, recovered from the 3×3 samples s, t ∈ {−1, 0, 1}.
template <class F>
auto bidegree_coefficients(F&& f, const Vec3& h, const Mat3& S) {
  using T = std::decay_t<decltype(f(h, S))>;
  std::array<std::array<T, 3>, 3> g{}, c{};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) g[a][b] = f(double(a - 1) * h, double(b - 1) * S);
  auto split = [](const T& m, const T& z, const T& p) {
    return std::array<T, 3>{z, 0.5 * (p - m), 0.5 * (p + m) - z};
  };
  std::array<std::array<T, 3>, 3> tmp{};  // tmp[a][q]: coefficient of t^q at s = a − 1
  for (int a = 0; a < 3; ++a) tmp[a] = split(g[a][0], g[a][1], g[a][2]);
  for (int q = 0; q < 3; ++q) {
    auto col = split(tmp[0][q], tmp[1][q], tmp[2][q]);
    for (int p = 0; p < 3; ++p) c[p][q] = col[p];
  }
  return c;
}

/// Recession transform of a bidegree (2, 2) polynomial integrand:
/// f̃(h̃, S̃) = Σ_pq f_pq(h̃, S̃) (1−|h̃|²)^{1−p/2} (1−|S̃|²)^{1−q/2}, continuous
/// on the closed balls.
template <class F>
auto quadratic_recession(F&& f, const Vec3& h, const Mat3& S) {
  const auto c = bidegree_coefficients(f, h, S);
  const double a2 = std::max(0.0, 1.0 - norm2(h)), b2 = std::max(0.0, 1.0 - norm2(S));
  const double a[3] = {a2, std::sqrt(a2), 1.0}, b[3] = {b2, std::sqrt(b2), 1.0};
  auto out = c[0][0] * (a[0] * b[0]);
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q)
      if (p + q > 0) out += c[p][q] * (a[p] * b[q]);
  return out;
}

/// f̃(x, h̃, S̃) = f(x, h̃/√(1−|h̃|²), S̃/√(1−|S̃|²)) (1−|h̃|²)(1−|S̃|²).
/// Throws ValidationError outside the closed balls, or on their boundary for a
/// general integrand without extension.
double recession_eval(const TestIntegrand& f, const Vec3& x, const Vec3& h, const Mat3& S);

/// ⟪ν_t, f⟫ = Σ vol Σ w f(x, d(x), S) + Σ vol m Σ w f̃(x, h̃, S̃).
double pairing(const GeneralizedYoungMeasure& gym, const TestIntegrand& f, const VectorField& d);
/// Matrix- or vector-valued pairing evaluated per cell: returns the cell
/// contributions (without the volume factor) of a bidegree (2, 2) polynomial
/// integrand F(h, S).
template <class F>
auto cell_pairing(const GeneralizedYoungMeasure& gym, std::size_t c, const Vec3& d, F&& f) {
  using T = std::decay_t<decltype(f(d, Mat3{}))>;
  T acc{};
  for (const auto& a : gym.oscillation[c]) acc += a.w * f(d, a.S);
  if (gym.concentration[c] != 0.0)
    for (const auto& a : gym.angle[c])
      acc += (gym.concentration[c] * a.w) * quadratic_recession(f, a.h, a.S);
  return acc;
}

/// Σ μ Σ w Γ⋮(Γ·A) with A = ∇φ per cell.
double defect_pairing(const DefectMeasure& mu, const MatrixField& grad_phi);

/// One atom per cell at ∇d, no concentration.
GeneralizedYoungMeasure dirac_from_field(const Operators& ops, const VectorField& d);
GeneralizedYoungMeasure dirac_from_gradient(const MatrixField& grad_d);
/// Two atoms ½δ_{∇d+P} + ½δ_{∇d−P} per cell with random P, |P| = amplitude.
GeneralizedYoungMeasure oscillating_pair(const MatrixField& grad_d, double amplitude,
                                         std::uint64_t seed);

/// Per-cell Σ w S.
MatrixField barycenter(const GeneralizedYoungMeasure& gym);

/// ⟪ν°_x, |S − A|²⟫ − |Σ w S − A|² for cell c (nonnegative by Jensen).
double jensen_gap(const GeneralizedYoungMeasure& gym, std::size_t c, const Mat3& A);

// ---- measure-valued residuals ------------------------------------------------

/// Candidate data at both ends of a time slab [t0, t1]. dt_d0 / dt_d1 are
/// optional exact time derivatives of the director; when empty the difference
/// quotient (d1 − d0)/(t1 − t0) is used at both ends.
struct SlabData {
  double t0 = 0.0, t1 = 0.0;
  VectorField v0, v1, d0, d1;
  VectorField dt_d0, dt_d1;
  GeneralizedYoungMeasure nu0, nu1;
  DefectMeasure mu0, mu1;
  VectorField g0, g1;  // body force, empty if none
};

/// Signed residuals; the max_* accessors take absolute values.
struct MvResiduals {
  std::vector<double> velocity;  // per velocity test function
  std::vector<double> director;  // per director test function
  std::vector<double> q;         // discrete q against the measure formula
  double max_velocity() const;
  double max_director() const;
  double max_q() const;
};

/// Residuals of the velocity equation, the director equation (with d×q taken
/// from the measure formula) and of the d×q identity itself, integrated over
/// the slab with the trapezoidal rule. Velocity test functions must be
/// divergence free.
MvResiduals mv_residuals(const Operators& ops, const ElasticTensors& et,
                         const LeslieCoefficients& coeffs, const SlabData& slab,
                         const std::vector<VectorField>& velocity_tests,
                         const std::vector<VectorField>& director_tests);

/// Smooth periodic test functions (band-limited, deterministic in seed);
/// divergence-free when `solenoidal`.
std::vector<VectorField> smooth_test_functions(const Operators& ops, int count, bool solenoidal,
                                               std::uint64_t seed);

// ---- measure snapshots ---------------------------------------------------

/// Plain-text layout, 17 significant digits:
///   NEMATIC-MEASURE 1
///   grid nx ny nz Lx Ly Lz
///   then per cell with any content:
///   cell <index> osc <n> conc <m> angle <k> defect <mass> dir <r>
///   n lines "w S00 S01 ... S22", k lines "w h0 h1 h2 S00 ... S22",
///   r lines "w G000 ... G222"
///   end
void write_measures(const std::string& path, const GeneralizedYoungMeasure& gym,
                    const DefectMeasure& mu);
void read_measures(const std::string& path, GeneralizedYoungMeasure& gym, DefectMeasure& mu);

}  // namespace nematic
