#include "nematic/leslie.hpp"

#include <cmath>
#include <sstream>

#include "nematic/errors.hpp"

namespace nematic {

std::vector<std::string> validate_dissipativity(const LeslieCoefficients& c) {
  std::vector<std::string> violations;
  const double lam23 = c.lambda * c.mu23();
  if (!(c.mu1 > 0.0)) violations.emplace_back("mu1 > 0");
  if (!(c.mu4 > 0.0)) violations.emplace_back("mu4 > 0");
  if (!(c.mu56() - lam23 > 0.0)) violations.emplace_back("(mu5+mu6) - lambda(mu2+mu3) > 0");
  if (!(c.mu1 + lam23 > 0.0)) violations.emplace_back("mu1 + lambda(mu2+mu3) > 0");
  const double x = c.cross_coefficient();
  if (!(4.0 * (c.mu56() - lam23) > x * x))
    violations.emplace_back("4((mu5+mu6) - lambda(mu2+mu3)) > ((mu2+mu3) - lambda)^2");
  return violations;
}

bool parodi_holds(const LeslieCoefficients& c, double tol) {
  return std::abs(c.lambda - c.mu23()) <= tol;
}

Vec3 corotational_rate_e(const Vec3& dt_d, const Vec3& v, const Mat3& grad_d, const Mat3& grad_v,
                         const Vec3& d) {
  return dt_d + grad_d * v - skw(grad_v) * d;
}

Vec3 corotational_rate_from_q(const Vec3& d, const Mat3& grad_v, const Vec3& q, double lambda) {
  const Vec3 x = lambda * (sym(grad_v) * d) + q;
  return -(x - dot(d, x) * d);
}

Mat3 leslie_stress_unchecked(const Vec3& d, const Vec3& e, const Mat3& grad_v,
                             const LeslieCoefficients& c) {
  const Mat3 D = sym(grad_v);
  const Vec3 Dd = D * d;
  const Mat3 dDd = outer(d, Dd);
  const Mat3 de = outer(d, e);
  return c.mu1 * dot(d, Dd) * outer(d, d) + c.mu4 * D + c.mu56() * sym(dDd) + c.mu23() * sym(de) +
         c.lambda * skw(dDd) + skw(de);
}

Mat3 leslie_stress(const Vec3& d, const Vec3& e, const Mat3& grad_v, const LeslieCoefficients& c) {
  const double drift = std::abs(norm(d) - 1.0);
  if (drift > kUnitTolerance) {
    std::ostringstream os;
    os << "leslie_stress: director not unit length (| |d| - 1 | = " << drift << ")";
    throw ValidationError(os.str());
  }
  return leslie_stress_unchecked(d, e, grad_v, c);
}

Mat3 ericksen_stress(const Mat3& grad_d, const Mat3& FS) { return transpose(grad_d) * FS; }

double dissipation_density(const Vec3& d, const Mat3& Dv, const Vec3& q,
                           const LeslieCoefficients& c) {
  const Vec3 Dd = Dv * d;
  const double dDd = dot(d, Dd);
  const double lam23 = c.lambda * c.mu23();
  return (c.mu1 + lam23) * dDd * dDd + c.mu4 * norm2(Dv) + (c.mu56() - lam23) * norm2(Dd) +
         norm2(cross(d, q));
}

double cross_term(const Vec3& d, const Mat3& Dv, const Vec3& q, const LeslieCoefficients& c) {
  return c.cross_coefficient() * dot(cross(d, q), cross(d, Dv * d));
}

DissipationBalance dissipation_balance(const Vec3& d, const Mat3& grad_v, const Vec3& q,
                                       const LeslieCoefficients& c) {
  const Mat3 D = sym(grad_v);
  const Mat3 W = skw(grad_v);
  const Vec3 e = corotational_rate_from_q(d, grad_v, q, c.lambda);
  DissipationBalance b{};
  b.stress_power = ddot(leslie_stress_unchecked(d, e, grad_v, c), grad_v);
  b.rotation_work = dot(cross(d, W * d), cross(d, q));
  b.director_work = dot(e, q);
  b.dissipation = dissipation_density(d, D, q, c);
  b.cross = cross_term(d, D, q, c);
  return b;
}

}  // namespace nematic
