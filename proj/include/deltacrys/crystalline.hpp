#pragma once

#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "deltacrys/characters.hpp"
#include "deltacrys/formalgroup.hpp"

namespace deltacrys {

/// Frobenius on H^1 of y^2 = Q(x) in the basis {dx/y, x dx/y}; column j is
/// the image of the j-th basis form.
struct FrobeniusMatrix {
  PMatrix entries;
  int precision = 0;  // digits certified after the reduction losses
  int loss = 0;
  WeierstrassCurve curve;  // the model y^2 = Q(x) actually used
};

/// Monsky-Washnitzer reduction with the lift x -> x^p. Long Weierstrass
/// inputs are replaced by the completed-square model. Requires p >= 5, N >= 4.
FrobeniusMatrix kedlaya_frobenius(const WeierstrassCurve& E);

struct HodgeIntersection {
  int dim = 0;
  /// Valuation of the x dx/y component of F(dx/y).
  int off_valuation = 0;
  PadicRational witness;
};

/// H^0 = span(dx/y); dim 1 iff F(dx/y) stays in it to the matrix precision.
HodgeIntersection hodge_frobenius_intersection(const FrobeniusMatrix& Fm);

using Slope = boost::rational<int>;

/// Newton slopes of a characteristic polynomial x^n + c_{n-1} x^{n-1} + ... + c_0
/// given by its coefficients c_0..c_{n-1}; returned in increasing order.
std::vector<Slope> newton_slopes(const std::vector<PadicRational>& lower_coeffs);

/// c_0, c_1 of x^2 + c_1 x + c_0 (or c_0 of x + c_0) for a 1x1 or 2x2 matrix.
std::vector<PadicRational> char_poly(const PMatrix& m);

struct ComparisonCheck {
  std::string name;
  bool pass = false;
  int residual_valuation = 0;
  int precision = 0;
  std::string detail;
};

struct ComparisonReport {
  std::vector<ComparisonCheck> checks;
  std::vector<Slope> delta_slopes;
  std::vector<Slope> expected_slopes;
  int hodge_dim = 0;
  bool ok() const;
};

/// Char poly, rk X_1 against dim(H^0 meet F H^0), slopes and CL agreement.
ComparisonReport compare_isocrystals(const IsocrystalData& D, const FrobeniusMatrix& Fm, const CurveInvariants& inv);
ComparisonReport compare_isocrystals(const WeierstrassCurve& E);

std::string to_string(const Slope& s);

}  // namespace deltacrys
