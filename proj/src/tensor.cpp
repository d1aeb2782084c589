#include "nematic/tensor.hpp"

namespace nematic {

Tensor3 levi_civita() {
  Tensor3 u;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) u(i, j, k) = levi_civita(i, j, k);
  return u;
}

Tensor3 outer(const Mat3& A, const Vec3& a) {
  Tensor3 g;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) g(i, j, k) = A(i, j) * a[k];
  return g;
}

double t3_dot_t3(const Tensor3& G, const Tensor3& H) {
  double s = 0.0;
  for (std::size_t i = 0; i < 27; ++i) s += G.a[i] * H.a[i];
  return s;
}

Vec3 t3_mat(const Tensor3& G, const Mat3& A) {
  Vec3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) r[i] += G(i, j, k) * A(j, k);
  return r;
}

Tensor3 t3_dot_mat(const Tensor3& G, const Mat3& A) {
  Tensor3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t l = 0; l < 3; ++l)
        for (std::size_t k = 0; k < 3; ++k) r(i, j, l) += G(i, j, k) * A(k, l);
  return r;
}

Mat3 t3_vec(const Tensor3& G, const Vec3& a) {
  Mat3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) r(i, j) += G(i, j, k) * a[k];
  return r;
}

Vec3 mat_t3(const Mat3& A, const Tensor3& G) {
  Vec3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) r[k] += A(i, j) * G(i, j, k);
  return r;
}

Mat3 t4_mat(const Tensor4& L, const Mat3& A) {
  Mat3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t l = 0; l < 3; ++l) r(i, j) += L(i, j, k, l) * A(k, l);
  return r;
}

Tensor3 t4_vec3idx(const Tensor4& L, const Vec3& a) {
  Tensor3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t l = 0; l < 3; ++l) r(i, j, k) += L(i, j, k, l) * a[l];
  return r;
}

Tensor3 t4_t3(const Tensor4& L, const Tensor3& G) {
  Tensor3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t m = 0; m < 3; ++m)
        for (std::size_t k = 0; k < 3; ++k)
          for (std::size_t l = 0; l < 3; ++l) r(i, j, m) += L(i, j, k, l) * G(k, l, m);
  return r;
}

Vec3 t4_t3_triple(const Tensor4& L, const Tensor3& G) {
  Vec3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t l = 0; l < 3; ++l) r[i] += L(i, j, k, l) * G(j, k, l);
  return r;
}

double t4_quadratic(const Mat3& A, const Tensor4& L, const Mat3& B) {
  return ddot(A, t4_mat(L, B));
}

Tensor3 t6_t3(const Tensor6& T, const Tensor3& G) {
  Tensor3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) {
        double s = 0.0;
        for (std::size_t l = 0; l < 3; ++l)
          for (std::size_t m = 0; m < 3; ++m)
            for (std::size_t n = 0; n < 3; ++n) s += T(i, j, k, l, m, n) * G(l, m, n);
        r(i, j, k) = s;
      }
  return r;
}

Tensor4 mat_t6(const Mat3& A, const Tensor6& T) {
  Tensor4 r;
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t l = 0; l < 3; ++l)
      for (std::size_t m = 0; m < 3; ++m)
        for (std::size_t n = 0; n < 3; ++n) {
          double s = 0.0;
          for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) s += A(i, j) * T(i, j, k, l, m, n);
          r(k, l, m, n) = s;
        }
  return r;
}

Tensor5 vec_t6(const Vec3& a, const Tensor6& T) {
  Tensor5 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t l = 0; l < 3; ++l)
        for (std::size_t m = 0; m < 3; ++m)
          for (std::size_t n = 0; n < 3; ++n) {
            double s = 0.0;
            for (std::size_t k = 0; k < 3; ++k) s += a[k] * T(i, j, k, l, m, n);
            r(i, j, l, m, n) = s;
          }
  return r;
}

Mat3 t5_t3(const Tensor5& P, const Tensor3& G) {
  Mat3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      double s = 0.0;
      for (std::size_t l = 0; l < 3; ++l)
        for (std::size_t m = 0; m < 3; ++m)
          for (std::size_t n = 0; n < 3; ++n) s += P(i, j, l, m, n) * G(l, m, n);
      r(i, j) = s;
    }
  return r;
}

double t6_quadratic(const Tensor3& G, const Tensor6& T, const Tensor3& H) {
  return t3_dot_t3(G, t6_t3(T, H));
}

}  // namespace nematic
