#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "deltacrys/context.hpp"
#include "deltacrys/padic.hpp"
#include "deltacrys/series.hpp"

namespace deltacrys {

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with good reduction at p.
struct WeierstrassCurve {
  std::int64_t a1 = 0, a2 = 0, a3 = 0, a4 = 0, a6 = 0;
  Context ctx;

  /// Throws BadReduction when p divides the discriminant.
  static WeierstrassCurve make(const Context& ctx, std::int64_t a1, std::int64_t a2, std::int64_t a3,
                               std::int64_t a4, std::int64_t a6);
  static WeierstrassCurve short_form(const Context& ctx, std::int64_t a4, std::int64_t a6);
  /// "a1,a2,a3,a4,a6" or "a4,a6".
  static WeierstrassCurve parse(const Context& ctx, const std::string& text);

  BigInt discriminant() const;
  bool is_y2_eq_cubic() const { return a1 == 0 && a3 == 0; }
  /// Y^2 = X^3 + b2 X^2 + 8 b4 X + 16 b6 via X = 4x, Y = 8y + 4(a1 x + a3);
  /// isomorphic over Z_p for odd p.
  WeierstrassCurve completed_square_model() const;
  std::string to_string() const;
};

enum class GroupKind { Additive, Multiplicative, Elliptic };

std::string to_string(GroupKind kind);

/// One-dimensional formal group law F(t1, t2) with its logarithm and
/// exponential, all truncated at total degree ctx.M.
struct FormalGroupLaw {
  GroupKind kind = GroupKind::Additive;
  Context ctx;
  /// Relative precision of the coefficient arithmetic: N plus the denominator
  /// budget floor(log_p M) plus two guard digits.
  int working_precision = 0;
  TruncatedSeries law;  // variables t1, t2
  TruncatedSeries log;  // variable t
  TruncatedSeries exp;  // variable t
  std::optional<WeierstrassCurve> curve;
  /// For elliptic laws, w(t) = -1/y as a series in t = -x/y.
  std::optional<TruncatedSeries> w;

  /// Univariate series in variable t at this law's degree and precision.
  TruncatedSeries t_variable() const;
};

int working_precision_for(const Context& ctx);
/// Working precision able to carry log coefficients up to degree `degree`.
int working_precision_for(const Context& ctx, int degree);

FormalGroupLaw additive_group(const Context& ctx);
FormalGroupLaw multiplicative_group(const Context& ctx);
/// Requires M >= 4.
FormalGroupLaw formal_group_from_curve(const WeierstrassCurve& E);

/// Log through the invariant differential of the law, l'(t) = 1/F_X(0, t),
/// and exp as its reversion.
std::pair<TruncatedSeries, TruncatedSeries> formal_log_exp(const FormalGroupLaw& F);

/// Coefficients l_1..l_D of the logarithm (index k holds the t^k coefficient)
/// at relative precision `precision`, computed without series arithmetic
/// when a closed form is available. For elliptic laws this requires a1 = a3 = 0.
std::vector<PadicRational> log_coefficients(const FormalGroupLaw& F, int degree, int precision);

/// [m](t) by repeated application of the law.
TruncatedSeries multiplication_by(const FormalGroupLaw& F, int m);

struct CurveInvariants {
  std::int64_t a_p = 0;
  std::int64_t point_count = 0;
  bool ordinary = false;
};

/// Exhaustive count over F_p including the point at infinity.
CurveInvariants count_points_ap(const WeierstrassCurve& E);

}  // namespace deltacrys
