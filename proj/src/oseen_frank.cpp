#include "nematic/oseen_frank.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <string>

#include "nematic/errors.hpp"

namespace nematic {

namespace {

// Invariants of a third-order tensor that Θ reacts to.
struct ThetaInvariants {
  Vec3 trace_first_pair;  // t_k = Σ_l Γ_llk
  Vec3 bend;              // c_i = Σ_m Γ_imm − Σ_l Γ_lil
  double levi = 0.0;      // s = Σ Υ_kji Γ_ijk
};

ThetaInvariants theta_invariants(const Tensor3& G) {
  ThetaInvariants inv;
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t l = 0; l < 3; ++l) inv.trace_first_pair[k] += G(l, l, k);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t m = 0; m < 3; ++m) inv.bend[i] += G(i, m, m) - G(m, i, m);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) inv.levi += levi_civita(k, j, i) * G(i, j, k);
  return inv;
}

}  // namespace

KCoefficients derive_k(double K1, double K2, double K3) {
  if (!(K1 > 0.0) || !(K2 > 0.0) || !(K3 > 0.0)) {
    throw ValidationError("Frank constants must be positive (K1=" + std::to_string(K1) +
                          ", K2=" + std::to_string(K2) + ", K3=" + std::to_string(K3) + ")");
  }
  const double k2 = std::min(K2, K3) / 2.0;
  return {K1 / 2.0, k2, K1 / 2.0, K2 - k2, K3 - k2};
}

FrankConstants FrankConstants::from_K(double K1, double K2, double K3) {
  const auto k = derive_k(K1, K2, K3);
  FrankConstants f;
  f.K1 = K1;
  f.K2 = K2;
  f.K3 = K3;
  f.k1 = k.k1;
  f.k2 = k.k2;
  f.k3 = k.k3;
  f.k4 = k.k4;
  f.k5 = k.k5;
  return f;
}

ElasticTensors build_lambda(double k1, double k2) { return ElasticTensors(k1, k2, 0, 0, 0); }
ElasticTensors build_theta(double k3, double k4, double k5) {
  return ElasticTensors(0, 0, k3, k4, k5);
}

Mat3 ElasticTensors::lambda_apply(const Mat3& A) const {
  Mat3 r = k2_ * (A - transpose(A));
  const double t = k1_ * trace(A);
  for (std::size_t i = 0; i < 3; ++i) r(i, i) += t;
  return r;
}

double ElasticTensors::lambda_quadratic(const Mat3& A, const Mat3& B) const {
  return ddot(A, lambda_apply(B));
}

Tensor3 ElasticTensors::theta_apply(const Tensor3& G) const {
  const auto inv = theta_invariants(G);
  Tensor3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) {
        double v = k3_ * kronecker(i, j) * inv.trace_first_pair[k];
        v += k5_ * (kronecker(j, k) * inv.bend[i] - kronecker(i, k) * inv.bend[j]);
        v += levi_sign_ * k4_ * levi_civita(k, j, i) * inv.levi;
        r(i, j, k) = v;
      }
  return r;
}

double ElasticTensors::theta_quadratic(const Tensor3& G, const Tensor3& H) const {
  const auto a = theta_invariants(G);
  const auto b = theta_invariants(H);
  return k3_ * dot(a.trace_first_pair, b.trace_first_pair) + levi_sign_ * k4_ * a.levi * b.levi +
         k5_ * dot(a.bend, b.bend);
}

Tensor4 ElasticTensors::lambda_dense() const {
  Tensor4 L;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t l = 0; l < 3; ++l)
          L(i, j, k, l) = k1_ * kronecker(i, j) * kronecker(k, l) +
                          k2_ * (kronecker(i, k) * kronecker(j, l) - kronecker(i, l) * kronecker(j, k));
  return L;
}

Tensor6 ElasticTensors::theta_dense() const {
  Tensor6 T;
  auto d = kronecker;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t l = 0; l < 3; ++l)
          for (std::size_t m = 0; m < 3; ++m)
            for (std::size_t n = 0; n < 3; ++n) {
              double v = k3_ * d(i, j) * d(l, m) * d(k, n);
              v += k5_ * (d(i, l) * d(m, n) * d(j, k) - d(m, i) * d(l, n) * d(j, k) -
                          d(l, j) * d(m, n) * d(i, k) + d(j, m) * d(l, n) * d(i, k));
              v += levi_sign_ * k4_ *
                   (d(k, n) * d(j, m) * d(i, l) + d(k, m) * d(j, l) * d(i, n) +
                    d(k, l) * d(j, n) * d(i, m) - d(k, n) * d(j, l) * d(i, m) -
                    d(k, m) * d(j, n) * d(i, l) - d(k, l) * d(j, m) * d(i, n));
              T(i, j, k, l, m, n) = v;
            }
  return T;
}

double ElasticTensors::theta_max_eigenvalue() const {
  const Tensor6 T = theta_dense();
  Eigen::Matrix<double, 27, 27> M;
  for (std::size_t r = 0; r < 27; ++r)
    for (std::size_t c = 0; c < 27; ++c) M(r, c) = T.a[27 * r + c];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 27, 27>> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double energy_density_K(const Vec3& h, const Mat3& S, const FrankConstants& f) {
  // curl_i = Σ Υ_ijk ∂_j d_k with S_kj = ∂_j d_k
  Vec3 curl;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) curl[i] += levi_civita(i, j, k) * S(k, j);
  const double div = trace(S);
  const double twist = dot(h, curl);
  return 0.5 * f.K1 * div * div + 0.5 * f.K2 * twist * twist + 0.5 * f.K3 * norm2(cross(h, curl));
}

double energy_density_k(const Vec3& h, const Mat3& S, const ElasticTensors& et) {
  const Mat3 W = skw(S);
  const double tr = trace(S);
  const double twist = ddot(cross_matrix(h), W);
  const double two_f = et.k1() * tr * tr + 2.0 * et.k2() * norm2(W) +
                       et.k3() * norm2(h) * tr * tr + et.k4() * twist * twist +
                       4.0 * et.k5() * norm2(W * h);
  return 0.5 * two_f;
}

double energy_density_tensor(const Vec3& h, const Mat3& S, const ElasticTensors& et) {
  const Tensor3 Sh = outer(S, h);
  return 0.5 * (et.lambda_quadratic(S, S) + et.theta_quadratic(Sh, Sh));
}

Mat3 F_S(const Vec3& h, const Mat3& S, const ElasticTensors& et) {
  const Mat3 W = skw(S);
  const Mat3 H = cross_matrix(h);
  const double tr = trace(S);
  Mat3 r = 2.0 * et.k2() * W + et.k4() * ddot(H, W) * H + 4.0 * et.k5() * skw(outer(W * h, h));
  const double diag = et.k1() * tr + et.k3() * tr * norm2(h);
  for (std::size_t i = 0; i < 3; ++i) r(i, i) += diag;
  return r;
}

Vec3 F_h(const Vec3& h, const Mat3& S, const ElasticTensors& et) {
  const Mat3 W = skw(S);
  const double tr = trace(S);
  return et.k3() * tr * tr * h + 2.0 * et.k4() * ddot(cross_matrix(h), W) * uncross(W) +
         4.0 * et.k5() * (transpose(W) * (W * h));
}

double ellipticity_form(const Vec3& a, const Vec3& b, const ElasticTensors& et) {
  const double ab = dot(a, b);
  return et.k1() * ab * ab + et.k2() * (norm2(a) * norm2(b) - ab * ab);
}

}  // namespace nematic
