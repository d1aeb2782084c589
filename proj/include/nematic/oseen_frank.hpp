#pragma once

/// \file
/// Oseen–Frank elastic energy: moduli, the elastic tensors Λ (order 4) and
/// Θ (order 6) in closed Kronecker-delta form, the energy density in its three
/// equivalent forms and its partial derivatives.

#include "nematic/tensor.hpp"

namespace nematic {

/// Elastic moduli. K1..K3 are the classical splay/twist/bend constants; the
/// k's are the coefficients of the reformulated energy
///   2F = k1 (div d)² + k2 |curl d|² + k3 |d|²(div d)² + k4 (d·curl d)² + k5 |d×curl d|².
struct FrankConstants {
  double K1 = 1.0, K2 = 1.0, K3 = 1.0;
  double k1 = 0.5, k2 = 0.5, k3 = 0.5, k4 = 0.5, k5 = 0.5;

  /// Builds the constants from K1..K3 via derive_k. Throws ValidationError for
  /// nonpositive moduli.
  static FrankConstants from_K(double K1, double K2, double K3);
};

struct KCoefficients {
  double k1, k2, k3, k4, k5;
};

/// k1 = k3 = K1/2, k2 = min(K2, K3)/2, k4 = K2 − k2, k5 = K3 − k2.
KCoefficients derive_k(double K1, double K2, double K3);

/// Λ and Θ as contraction operators.
///
/// Λ_ijkl = k1 δij δkl + k2 (δik δjl − δil δjk)
/// Θ = k3 Θ¹ + k4 Θ^LC + k5 Θ^bend with
///   Θ¹_ijklmn    = δij δlm δkn,
///   Θ^LC_ijklmn  = Υ_kji Υ_nml,
///   Θ^bend_ijklmn = δil δmn δjk − δmi δln δjk − δlj δmn δik + δjm δln δik.
class ElasticTensors {
 public:
  ElasticTensors() = default;
  ElasticTensors(double k1, double k2, double k3, double k4, double k5)
      : k1_(k1), k2_(k2), k3_(k3), k4_(k4), k5_(k5) {}
  explicit ElasticTensors(const FrankConstants& f)
      : ElasticTensors(f.k1, f.k2, f.k3, f.k4, f.k5) {}

  double k1() const { return k1_; }
  double k2() const { return k2_; }
  double k3() const { return k3_; }
  double k4() const { return k4_; }
  double k5() const { return k5_; }

  /// Λ:A = k1 tr(A) I + k2 (A − Aᵀ).
  Mat3 lambda_apply(const Mat3& A) const;
  /// A:Λ:B.
  double lambda_quadratic(const Mat3& A, const Mat3& B) const;
  /// Θ⋮Γ for an arbitrary third-order Γ.
  Tensor3 theta_apply(const Tensor3& G) const;
  /// Γ⋮Θ⋮Γ'.
  double theta_quadratic(const Tensor3& G, const Tensor3& H) const;

  /// Dense 3⁴ / 3⁶ materialisations (used for cross-checks and the
  /// eigenvalue bound below).
  Tensor4 lambda_dense() const;
  Tensor6 theta_dense() const;

  /// Largest eigenvalue of Θ viewed as a symmetric 27×27 matrix. Since Θ is
  /// positive semidefinite for k3, k4, k5 ≥ 0, |Θ⋮X|² ≤ λmax · X⋮Θ⋮X.
  double theta_max_eigenvalue() const;

  /// Test-mode mutation hook: flips the sign of the Levi–Civita block of Θ.
  /// Only the verification suite's fault-injection switch sets this.
  void inject_levi_civita_sign_flip(bool on) { levi_sign_ = on ? -1.0 : 1.0; }

 private:
  double k1_ = 0.0, k2_ = 0.0, k3_ = 0.0, k4_ = 0.0, k5_ = 0.0;
  double levi_sign_ = 1.0;
};

ElasticTensors build_lambda(double k1, double k2);
ElasticTensors build_theta(double k3, double k4, double k5);

// ---- energy density --------------------------------------------------------

/// Classical form K1/2 (tr S)² + K2/2 (h·curl)² + K3/2 |h×curl|², curl read off
/// S via the Levi–Civita tensor. Equals the other two forms only for |h| = 1.
double energy_density_K(const Vec3& h, const Mat3& S, const FrankConstants& f);
/// 2F = k1 tr(S)² + 2 k2 |S_skw|² + k3 |h|² tr(S)² + k4 ([h]×:S_skw)² + 4 k5 |S_skw h|².
double energy_density_k(const Vec3& h, const Mat3& S, const ElasticTensors& et);
/// 2F = S:Λ:S + (S⊗h)⋮Θ⋮(S⊗h).
double energy_density_tensor(const Vec3& h, const Mat3& S, const ElasticTensors& et);

inline double energy_density(const Vec3& h, const Mat3& S, const ElasticTensors& et) {
  return energy_density_k(h, S, et);
}

/// ∂F/∂S = k1 tr(S) I + 2k2 S_skw + k3 tr(S)|h|² I + k4 [h]×([h]×:S_skw)
///         + 4k5 ((S_skw h) ⊗ h)_skw
Mat3 F_S(const Vec3& h, const Mat3& S, const ElasticTensors& et);
/// ∂F/∂h = k3 tr(S)² h + 2k4 ([h]×:S_skw) uncross(S_skw) + 4k5 S_skwᵀ S_skw h
Vec3 F_h(const Vec3& h, const Mat3& S, const ElasticTensors& et);

/// Ellipticity form a⊗b:Λ:a⊗b = k1 (a·b)² + k2 (|a|²|b|² − (a·b)²).
double ellipticity_form(const Vec3& a, const Vec3& b, const ElasticTensors& et);

}  // namespace nematic
