#pragma once

/// \file
/// Fixed-size (d = 3) vectors, matrices and higher-order tensors together with
/// the products and contractions used by the elastic energy calculus.
///
/// Index conventions follow the usual component notation: (a ⊗ b)_ij = a_i b_j,
/// (A ⊗ a)_ijk = A_ij a_k, A:B = Σ A_ij B_ij, Γ⋮Γ' = Σ Γ_ijk Γ'_ijk.

#include <array>
#include <cmath>
#include <cstddef>

namespace nematic {

struct Vec3 {
  std::array<double, 3> c{};

  constexpr double& operator[](std::size_t i) { return c[i]; }
  constexpr double operator[](std::size_t i) const { return c[i]; }

  constexpr Vec3& operator+=(const Vec3& o) {
    for (std::size_t i = 0; i < 3; ++i) c[i] += o.c[i];
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    for (std::size_t i = 0; i < 3; ++i) c[i] -= o.c[i];
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    for (auto& x : c) x *= s;
    return *this;
  }
  friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend constexpr Vec3 operator-(Vec3 a) { return a *= -1.0; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;

  static constexpr Vec3 unit(std::size_t i) {
    Vec3 e;
    e[i] = 1.0;
    return e;
  }
};

struct Mat3 {
  std::array<double, 9> a{};

  constexpr double& operator()(std::size_t i, std::size_t j) { return a[3 * i + j]; }
  constexpr double operator()(std::size_t i, std::size_t j) const { return a[3 * i + j]; }

  constexpr Mat3& operator+=(const Mat3& o) {
    for (std::size_t i = 0; i < 9; ++i) a[i] += o.a[i];
    return *this;
  }
  constexpr Mat3& operator-=(const Mat3& o) {
    for (std::size_t i = 0; i < 9; ++i) a[i] -= o.a[i];
    return *this;
  }
  constexpr Mat3& operator*=(double s) {
    for (auto& x : a) x *= s;
    return *this;
  }
  friend constexpr Mat3 operator+(Mat3 x, const Mat3& y) { return x += y; }
  friend constexpr Mat3 operator-(Mat3 x, const Mat3& y) { return x -= y; }
  friend constexpr Mat3 operator-(Mat3 x) { return x *= -1.0; }
  friend constexpr Mat3 operator*(Mat3 x, double s) { return x *= s; }
  friend constexpr Mat3 operator*(double s, Mat3 x) { return x *= s; }
  friend constexpr bool operator==(const Mat3&, const Mat3&) = default;

  static constexpr Mat3 identity() {
    Mat3 m;
    m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
    return m;
  }
};

/// Third-order tensor, row-major in (i, j, k).
struct Tensor3 {
  std::array<double, 27> a{};

  constexpr double& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return a[9 * i + 3 * j + k];
  }
  constexpr double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return a[9 * i + 3 * j + k];
  }
  constexpr Tensor3& operator+=(const Tensor3& o) {
    for (std::size_t i = 0; i < 27; ++i) a[i] += o.a[i];
    return *this;
  }
  constexpr Tensor3& operator-=(const Tensor3& o) {
    for (std::size_t i = 0; i < 27; ++i) a[i] -= o.a[i];
    return *this;
  }
  constexpr Tensor3& operator*=(double s) {
    for (auto& x : a) x *= s;
    return *this;
  }
  friend constexpr Tensor3 operator+(Tensor3 x, const Tensor3& y) { return x += y; }
  friend constexpr Tensor3 operator-(Tensor3 x, const Tensor3& y) { return x -= y; }
  friend constexpr Tensor3 operator*(Tensor3 x, double s) { return x *= s; }
  friend constexpr Tensor3 operator*(double s, Tensor3 x) { return x *= s; }
};

struct Tensor4 {
  std::array<double, 81> a{};

  constexpr double& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return a[27 * i + 9 * j + 3 * k + l];
  }
  constexpr double operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    return a[27 * i + 9 * j + 3 * k + l];
  }
};

/// Fifth-order tensor; produced by contracting a vector into the third slot of
/// a sixth-order tensor.
struct Tensor5 {
  std::array<double, 243> a{};

  constexpr double& operator()(std::size_t i, std::size_t j, std::size_t l, std::size_t m,
                               std::size_t n) {
    return a[81 * i + 27 * j + 9 * l + 3 * m + n];
  }
  constexpr double operator()(std::size_t i, std::size_t j, std::size_t l, std::size_t m,
                              std::size_t n) const {
    return a[81 * i + 27 * j + 9 * l + 3 * m + n];
  }
};

struct Tensor6 {
  std::array<double, 729> a{};

  constexpr double& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l,
                               std::size_t m, std::size_t n) {
    return a[243 * i + 81 * j + 27 * k + 9 * l + 3 * m + n];
  }
  constexpr double operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l,
                              std::size_t m, std::size_t n) const {
    return a[243 * i + 81 * j + 27 * k + 9 * l + 3 * m + n];
  }
};

constexpr double kronecker(std::size_t i, std::size_t j) { return i == j ? 1.0 : 0.0; }

// ---- vectors ---------------------------------------------------------------

constexpr double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]}};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
constexpr double norm2(const Vec3& a) { return dot(a, a); }

constexpr Mat3 outer(const Vec3& a, const Vec3& b) {
  Mat3 m;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) m(i, j) = a[i] * b[j];
  return m;
}

// ---- matrices --------------------------------------------------------------

constexpr Mat3 transpose(const Mat3& A) {
  Mat3 t;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) t(i, j) = A(j, i);
  return t;
}
constexpr double trace(const Mat3& A) { return A(0, 0) + A(1, 1) + A(2, 2); }

/// Frobenius product A:B.
constexpr double ddot(const Mat3& A, const Mat3& B) {
  double s = 0.0;
  for (std::size_t i = 0; i < 9; ++i) s += A.a[i] * B.a[i];
  return s;
}
constexpr double norm2(const Mat3& A) { return ddot(A, A); }
inline double norm(const Mat3& A) { return std::sqrt(norm2(A)); }

constexpr Mat3 operator*(const Mat3& A, const Mat3& B) {
  Mat3 C;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t k = 0; k < 3; ++k)
      for (std::size_t j = 0; j < 3; ++j) C(i, j) += A(i, k) * B(k, j);
  return C;
}
constexpr Vec3 operator*(const Mat3& A, const Vec3& b) {
  Vec3 r;
  for (std::size_t i = 0; i < 3; ++i) r[i] = A(i, 0) * b[0] + A(i, 1) * b[1] + A(i, 2) * b[2];
  return r;
}

constexpr Mat3 sym(const Mat3& A) { return 0.5 * (A + transpose(A)); }
constexpr Mat3 skw(const Mat3& A) { return 0.5 * (A - transpose(A)); }

/// [h]× with [h]× b = h × b.
constexpr Mat3 cross_matrix(const Vec3& h) {
  Mat3 m;
  m(0, 1) = -h[2];
  m(0, 2) = h[1];
  m(1, 0) = h[2];
  m(1, 2) = -h[0];
  m(2, 0) = -h[1];
  m(2, 1) = h[0];
  return m;
}

/// Left inverse of cross_matrix: (A_32, A_13, A_21) in one-based indices.
constexpr Vec3 uncross(const Mat3& A) { return {{A(2, 1), A(0, 2), A(1, 0)}}; }

// ---- third order -----------------------------------------------------------

/// Υ_ijk: sign of the permutation (i, j, k) of (0, 1, 2), zero otherwise.
constexpr double levi_civita(std::size_t i, std::size_t j, std::size_t k) {
  if (i == j || j == k || i == k) return 0.0;
  // even permutations are cyclic shifts of (0,1,2)
  return ((j + 3 - i) % 3 == 1) ? 1.0 : -1.0;
}
Tensor3 levi_civita();

/// (A ⊗ a)_ijk = A_ij a_k.
Tensor3 outer(const Mat3& A, const Vec3& a);

/// Γ⋮Γ'.
double t3_dot_t3(const Tensor3& G, const Tensor3& H);
inline double norm2(const Tensor3& G) { return t3_dot_t3(G, G); }

/// (Γ:A)_i = Σ_jk Γ_ijk A_jk.
Vec3 t3_mat(const Tensor3& G, const Mat3& A);
/// (Γ·A)_ijl = Σ_k Γ_ijk A_kl.
Tensor3 t3_dot_mat(const Tensor3& G, const Mat3& A);
/// (Γ·a)_ij = Σ_k Γ_ijk a_k.
Mat3 t3_vec(const Tensor3& G, const Vec3& a);
/// (A:Γ)_k = Σ_ij A_ij Γ_ijk (contraction over the leading pair).
Vec3 mat_t3(const Mat3& A, const Tensor3& G);

// ---- fourth order (dense) --------------------------------------------------

/// (Λ:A)_ij = Σ_kl Λ_ijkl A_kl.
Mat3 t4_mat(const Tensor4& L, const Mat3& A);
/// (Λ:a)_ijk = Σ_l Λ_ijkl a_l.
Tensor3 t4_vec3idx(const Tensor4& L, const Vec3& a);
/// (Λ:Γ)_ijm = Σ_kl Λ_ijkl Γ_klm.
Tensor3 t4_t3(const Tensor4& L, const Tensor3& G);
/// (Λ⋮Γ)_i = Σ_jkl Λ_ijkl Γ_jkl.
Vec3 t4_t3_triple(const Tensor4& L, const Tensor3& G);
/// A:Λ:B.
double t4_quadratic(const Mat3& A, const Tensor4& L, const Mat3& B);

// ---- sixth order (dense) ---------------------------------------------------

/// (Θ⋮Γ)_ijk = Σ_lmn Θ_ijklmn Γ_lmn.
Tensor3 t6_t3(const Tensor6& T, const Tensor3& G);
/// (A:Θ)_klmn = Σ_ij A_ij Θ_ijklmn.
Tensor4 mat_t6(const Mat3& A, const Tensor6& T);
/// (a·Θ)_ijlmn = Σ_k a_k Θ_ijklmn.
Tensor5 vec_t6(const Vec3& a, const Tensor6& T);
/// (Ψ⋮Γ)_ij = Σ_lmn Ψ_ijlmn Γ_lmn.
Mat3 t5_t3(const Tensor5& P, const Tensor3& G);
/// Γ⋮Θ⋮Γ'.
double t6_quadratic(const Tensor3& G, const Tensor6& T, const Tensor3& H);

}  // namespace nematic
