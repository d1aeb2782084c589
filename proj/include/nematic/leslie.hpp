#pragma once

/// \file
/// Leslie viscous stress, Ericksen elastic stress, the co-rotational director
/// rate and the pointwise dissipation balance.

#include <string>
#include <vector>

#include "nematic/tensor.hpp"

namespace nematic {

struct LeslieCoefficients {
  double mu1 = 1.0, mu2 = 0.0, mu3 = 0.0, mu4 = 1.0, mu5 = 1.0, mu6 = 1.0;
  double lambda = 0.0;

  double mu23() const { return mu2 + mu3; }
  double mu56() const { return mu5 + mu6; }
  /// Coefficient (μ2+μ3) − λ of the dissipation cross term.
  double cross_coefficient() const { return mu23() - lambda; }
};

/// Names of the violated dissipativity inequalities; empty when all five hold
/// strictly.
std::vector<std::string> validate_dissipativity(const LeslieCoefficients& c);
bool parodi_holds(const LeslieCoefficients& c, double tol = 1e-12);

/// Tolerance on | |d| − 1 | accepted by the pointwise stress routines.
inline constexpr double kUnitTolerance = 1e-10;

/// e = ∂t d + (∇d) v − skw(∇v) d.
Vec3 corotational_rate_e(const Vec3& dt_d, const Vec3& v, const Mat3& grad_d, const Mat3& grad_v,
                         const Vec3& d);
/// Second evaluation path valid along solutions of the director equation:
/// e = −(I − d⊗d)(λ sym(∇v) d + q).
Vec3 corotational_rate_from_q(const Vec3& d, const Mat3& grad_v, const Vec3& q, double lambda);

/// T^L = μ1 (d·Dd) d⊗d + μ4 D + (μ5+μ6) sym(d⊗Dd) + (μ2+μ3) sym(d⊗e)
///       + λ skw(d⊗Dd) + skw(d⊗e),   D = sym(∇v).
/// Throws ValidationError if |d| deviates from one by more than kUnitTolerance.
Mat3 leslie_stress(const Vec3& d, const Vec3& e, const Mat3& grad_v, const LeslieCoefficients& c);
/// Same as leslie_stress without the unit-length check (used in hot loops that
/// validated the field once).
Mat3 leslie_stress_unchecked(const Vec3& d, const Vec3& e, const Mat3& grad_v,
                             const LeslieCoefficients& c);

/// T^E = ∇dᵀ F_S.
Mat3 ericksen_stress(const Mat3& grad_d, const Mat3& FS);

/// (μ1+λ(μ2+μ3))(d·Dd)² + μ4|D|² + (μ5+μ6−λ(μ2+μ3))|Dd|² + |d×q|².
double dissipation_density(const Vec3& d, const Mat3& Dv, const Vec3& q,
                           const LeslieCoefficients& c);
/// ((μ2+μ3) − λ) (d×q)·(d×Dd).
double cross_term(const Vec3& d, const Mat3& Dv, const Vec3& q, const LeslieCoefficients& c);

/// Both sides of the pointwise balance with e taken from the director
/// equation:
///   T^L:∇v − (d×Wd)·(d×q) − e·q  =  dissipation − cross_term.
struct DissipationBalance {
  double stress_power;  // T^L:∇v
  double rotation_work; // (d×Wd)·(d×q)
  double director_work; // e·q
  double dissipation;
  double cross;

  double lhs() const { return stress_power - rotation_work - director_work; }
  double rhs() const { return dissipation - cross; }
};
DissipationBalance dissipation_balance(const Vec3& d, const Mat3& grad_v, const Vec3& q,
                                       const LeslieCoefficients& c);

}  // namespace nematic
