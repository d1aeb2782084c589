#include "doctest.h"
#include "nematic/oseen_frank.hpp"
#include "nematic/tensor.hpp"
#include "random_inputs.hpp"

using namespace nematic;
using testing_support::max_abs_diff;
using testing_support::Rng;

namespace {

// Oracles index the flat storage directly instead of going through operator().
double raw4(const Tensor4& L, int i, int j, int k, int l) { return L.a[((i * 3 + j) * 3 + k) * 3 + l]; }
double raw6(const Tensor6& T, int i, int j, int k, int l, int m, int n) {
  return T.a[((((i * 3 + j) * 3 + k) * 3 + l) * 3 + m) * 3 + n];
}

double perm_sign(int i, int j, int k) {
  // counts inversions
  if (i == j || j == k || i == k) return 0.0;
  int inv = (i > j) + (i > k) + (j > k);
  return inv % 2 == 0 ? 1.0 : -1.0;
}

}  // namespace

TEST_CASE("sym and skw split a matrix") {
  Rng rng(1);
  CHECK(sym(Mat3::identity()) == Mat3::identity());
  CHECK(norm2(skw(Mat3::identity())) == 0.0);
  Mat3 e12 = outer(Vec3::unit(0), Vec3::unit(1));
  CHECK(skw(e12)(0, 1) == doctest::Approx(0.5));
  CHECK(skw(e12)(1, 0) == doctest::Approx(-0.5));
  for (int n = 0; n < 200; ++n) {
    Mat3 A = rng.mat(), B = rng.mat();
    CHECK(max_abs_diff(sym(A) + skw(A), A) < 1e-15);
    Mat3 As = sym(A);
    double full = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) full += As(i, j) * B(i, j);
    CHECK(std::abs(full - ddot(As, sym(B))) < 1e-14);
  }
}

TEST_CASE("cross_matrix and uncross") {
  Rng rng(2);
  Mat3 e3 = cross_matrix(Vec3::unit(2));
  CHECK(e3(0, 1) == -1.0);
  CHECK(e3(1, 0) == 1.0);
  CHECK(norm2(e3 - Mat3{{0, -1, 0, 1, 0, 0, 0, 0, 0}}) == 0.0);
  CHECK(uncross(cross_matrix(Vec3::unit(1))) == Vec3::unit(1));
  CHECK(uncross(Mat3::identity()) == Vec3{});
  for (int n = 0; n < 1000; ++n) {
    Vec3 a = rng.vec(), b = rng.vec();
    CHECK(max_abs_diff(cross_matrix(a) * b, cross(a, b)) < 1e-15);
    CHECK(norm(transpose(cross_matrix(a)) * cross_matrix(a) * a) < 1e-15);
    Mat3 lhs = transpose(cross_matrix(a)) * cross_matrix(b);
    Mat3 rhs;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) rhs(i, j) = (i == j ? dot(a, b) : 0.0) - b[i] * a[j];
    CHECK(max_abs_diff(lhs, rhs) < 1e-14);
    CHECK(max_abs_diff(uncross(cross_matrix(a)), a) == 0.0);
    Mat3 W = skw(rng.mat());
    CHECK(max_abs_diff(0.5 * cross_matrix(2.0 * uncross(W)), W) < 1e-15);
  }
}

TEST_CASE("Levi-Civita tensor") {
  Tensor3 u = levi_civita();
  CHECK(u(0, 1, 2) == 1.0);
  CHECK(u(1, 0, 2) == -1.0);
  CHECK(u(0, 0, 1) == 0.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) CHECK(u(i, j, k) == perm_sign(i, j, k));
  CHECK(t3_mat(u, outer(Vec3::unit(0), Vec3::unit(1))) == Vec3::unit(2));
  Rng rng(3);
  for (int n = 0; n < 200; ++n) {
    Vec3 a = rng.vec(), b = rng.vec();
    CHECK(max_abs_diff(t3_mat(u, outer(a, b)), cross(a, b)) < 1e-15);
  }
}

TEST_CASE("Levi-Civita product identity over all index tuples") {
  auto d = kronecker;
  int mismatches = 0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t l = 0; l < 3; ++l)
          for (std::size_t m = 0; m < 3; ++m)
            for (std::size_t n = 0; n < 3; ++n) {
              double lhs = levi_civita(k, j, i) * levi_civita(n, m, l);
              double rhs = d(k, n) * d(j, m) * d(i, l) + d(k, m) * d(j, l) * d(i, n) +
                           d(k, l) * d(j, n) * d(i, m) - d(k, n) * d(j, l) * d(i, m) -
                           d(k, m) * d(j, n) * d(i, l) - d(k, l) * d(j, m) * d(i, n);
              if (lhs != rhs) ++mismatches;
            }
  CHECK(mismatches == 0);
}

TEST_CASE("dense contractions agree with index oracles") {
  Rng rng(4);
  for (int n = 0; n < 500; ++n) {
    Tensor4 L = rng.t4();
    Mat3 A = rng.mat();
    Vec3 a = rng.vec();
    Tensor3 G = rng.t3();
    Mat3 ref;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l) ref.a[i * 3 + j] += raw4(L, i, j, k, l) * A.a[k * 3 + l];
    CHECK(max_abs_diff(t4_mat(L, A), ref) < 1e-12);

    Tensor3 ref3;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l) ref3.a[(i * 3 + j) * 3 + k] += raw4(L, i, j, k, l) * a[l];
    CHECK(max_abs_diff(t4_vec3idx(L, a), ref3) < 1e-12);

    double q = 0.0;
    Mat3 B = rng.mat();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l) q += A.a[i * 3 + j] * raw4(L, i, j, k, l) * B.a[k * 3 + l];
    CHECK(std::abs(t4_quadratic(A, L, B) - q) < 1e-12);

    Vec3 gv;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) gv[i] += G.a[(i * 3 + j) * 3 + k] * A.a[j * 3 + k];
    CHECK(max_abs_diff(t3_mat(G, A), gv) < 1e-12);

    Mat3 gm;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) gm.a[i * 3 + j] += G.a[(i * 3 + j) * 3 + k] * a[k];
    CHECK(max_abs_diff(t3_vec(G, a), gm) < 1e-12);

    Tensor3 H = rng.t3();
    double gh = 0.0;
    for (int i = 0; i < 27; ++i) gh += G.a[i] * H.a[i];
    CHECK(std::abs(t3_dot_t3(G, H) - gh) < 1e-12);
  }
}

TEST_CASE("sixth order contractions agree with index oracles") {
  Rng rng(5);
  for (int n = 0; n < 100; ++n) {
    Tensor6 T = rng.t6();
    Tensor3 G = rng.t3(), H = rng.t3();
    Mat3 A = rng.mat();
    Vec3 a = rng.vec();
    Tensor3 ref;
    double quad = 0.0;
    Tensor4 am;
    Tensor5 av;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l)
            for (int m = 0; m < 3; ++m)
              for (int nn = 0; nn < 3; ++nn) {
                double t = raw6(T, i, j, k, l, m, nn);
                ref.a[(i * 3 + j) * 3 + k] += t * G.a[(l * 3 + m) * 3 + nn];
                quad += H.a[(i * 3 + j) * 3 + k] * t * G.a[(l * 3 + m) * 3 + nn];
                am.a[((k * 3 + l) * 3 + m) * 3 + nn] += A.a[i * 3 + j] * t;
                av.a[(((i * 3 + j) * 3 + l) * 3 + m) * 3 + nn] += a[k] * t;
              }
    CHECK(max_abs_diff(t6_t3(T, G), ref) < 1e-12);
    CHECK(std::abs(t6_quadratic(H, T, G) - quad) < 1e-12);
    Tensor4 am2 = mat_t6(A, T);
    Tensor5 av2 = vec_t6(a, T);
    double e4 = 0.0, e5 = 0.0;
    for (int i = 0; i < 81; ++i) e4 = std::max(e4, std::abs(am.a[i] - am2.a[i]));
    for (int i = 0; i < 243; ++i) e5 = std::max(e5, std::abs(av.a[i] - av2.a[i]));
    CHECK(e4 < 1e-12);
    CHECK(e5 < 1e-12);
  }
}

TEST_CASE("closed-form Lambda and Theta match dense materialisation") {
  Rng rng(6);
  Tensor4 identity4;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) identity4(i, j, i, j) = 1.0;
  Tensor6 zero6;
  for (int n = 0; n < 500; ++n) {
    ElasticTensors et(rng.positive(), rng.positive(), rng.positive(), rng.positive(),
                      rng.positive());
    Mat3 A = rng.mat();
    Tensor3 G = rng.t3();
    CHECK(max_abs_diff(et.lambda_apply(A), t4_mat(et.lambda_dense(), A)) < 1e-12);
    CHECK(max_abs_diff(t4_mat(identity4, A), A) < 1e-15);
    CHECK(norm2(t6_t3(zero6, G)) == 0.0);
    if (n < 100) {
      Tensor6 dense = et.theta_dense();
      CHECK(max_abs_diff(et.theta_apply(G), t6_t3(dense, G)) < 1e-12);
      Tensor3 H = rng.t3();
      CHECK(std::abs(et.theta_quadratic(G, H) - t6_quadratic(G, dense, H)) < 1e-12);
    }
  }
}
