#include "deltacrys/error.hpp"
#include "deltacrys/formalgroup.hpp"
#include "doctest.h"

using namespace deltacrys;

namespace {

PadicRational q(std::uint64_t p, std::int64_t n, std::int64_t d = 1) { return PadicRational::from_fraction(p, 12, n, d); }

bool close(const PadicRational& a, const PadicRational& b, int digits) {
  auto d = a - b;
  return d.valuation() >= digits;
}

// Precision lost to log denominators through degree M.
int budget(const FormalGroupLaw& F) { return F.ctx.N - 2; }

void check_law_invariants(const FormalGroupLaw& F) {
  const auto& ctx = F.ctx;
  const int wp = F.working_precision;
  auto t1 = TruncatedSeries::variable(ctx.p, {"t1", "t2"}, ctx.M, wp, 0);
  auto t2 = TruncatedSeries::variable(ctx.p, {"t1", "t2"}, ctx.M, wp, 1);
  // F(t, 0) = t and symmetry.
  CHECK(residual_valuation(F.law.substitute_zero(1), t1) >= budget(F));
  CHECK(residual_valuation(F.law, F.law.compose({t2, t1})) >= budget(F));
  // Integral coefficients.
  CHECK(F.law.min_valuation() >= 0);
  // l(F(t1,t2)) = l(t1) + l(t2).
  auto lhs = F.log.compose({F.law});
  auto rhs = F.log.compose({t1.truncated(ctx.M)}) + F.log.compose({t2});
  CHECK(residual_valuation(lhs, rhs) >= budget(F));
  // Associativity on three variables.
  std::vector<std::string> v3{"a", "b", "c"};
  auto a = TruncatedSeries::variable(ctx.p, v3, ctx.M, wp, 0);
  auto b = TruncatedSeries::variable(ctx.p, v3, ctx.M, wp, 1);
  auto c = TruncatedSeries::variable(ctx.p, v3, ctx.M, wp, 2);
  auto left = F.law.compose({F.law.compose({a, b}), c});
  auto right = F.law.compose({a, F.law.compose({b, c})});
  CHECK(residual_valuation(left, right) >= budget(F));
  // l is normalized, has p-adically bounded denominators, and exp inverts it.
  CHECK(F.log.linear_coeff(0) == q(ctx.p, 1));
  for (const auto& term : F.log.terms()) {
    const int k = F.log.exponents(term.key)[0];
    int vk = 0;
    for (int x = k; x % static_cast<int>(ctx.p) == 0; x /= static_cast<int>(ctx.p)) ++vk;
    if (!term.c.is_zero()) CHECK(term.c.valuation() >= -vk);
  }
  auto t = F.t_variable();
  CHECK(residual_valuation(F.exp.compose({F.log}), t) >= budget(F));
  // [m] is compatible with l.
  for (int m : {2, 3}) {
    auto mt = multiplication_by(F, m);
    CHECK(residual_valuation(F.log.compose({mt}), F.log.scaled(m)) >= budget(F));
  }
  // Log from the invariant differential of the law.
  auto [lg, ex] = formal_log_exp(F);
  CHECK(residual_valuation(lg, F.log) >= budget(F));
}

}  // namespace

TEST_CASE("additive and multiplicative groups") {
  auto ctx = Context::make(5, 8, 12);
  auto ga = additive_group(ctx);
  CHECK(residual_valuation(ga.log, ga.t_variable()) >= 8);
  CHECK(residual_valuation(ga.exp, ga.t_variable()) >= 8);
  check_law_invariants(ga);
  auto gm = multiplicative_group(ctx);
  CHECK(gm.log.coeff({2}) == q(5, -1, 2));
  CHECK(gm.log.coeff({5}) == q(5, 1, 5));
  CHECK(gm.law.coeff({1, 1}) == q(5, 1));
  check_law_invariants(gm);
  auto [lg, ex] = formal_log_exp(gm);
  CHECK(close(lg.coeff({10}), q(5, -1, 10), 6));
}

TEST_CASE("elliptic formal groups") {
  auto ctx = Context::make(5, 8, 12);
  auto E = WeierstrassCurve::parse(ctx, "1,1");
  auto F = formal_group_from_curve(E);
  // No degree 2 or 3 cross terms for a short model.
  for (int i = 0; i <= 3; ++i)
    for (int j = 0; i + j <= 3; ++j)
      if (i + j >= 2) CHECK(F.law.coeff({i, j}).is_zero());
  // Frozen from an exact rational expansion: l = t + (2/5) t^5 + (3/7) t^7 + ...
  CHECK(F.log.coeff({3}).is_zero());
  CHECK(close(F.log.coeff({5}), q(5, 2, 5), 7));
  CHECK(close(F.log.coeff({7}), q(5, 3, 7), 7));
  check_law_invariants(F);

  auto long_form = formal_group_from_curve(WeierstrassCurve::make(ctx, 1, -1, 1, 2, 3));
  check_law_invariants(long_form);
  CHECK(long_form.law.coeff({1, 1}) == q(5, -1));  // -a1 t1 t2 for a1 = 1
}

TEST_CASE("closed-form log coefficients agree with the series") {
  auto ctx = Context::make(5, 8, 20);
  for (auto text : {"1,1", "-1,0", "0,1", "1,2,0,3,1"}) {
    auto F = formal_group_from_curve(WeierstrassCurve::parse(ctx, text));
    auto c = log_coefficients(F, 20, 10);
    for (int k = 1; k <= 20; ++k) CHECK(close(c[static_cast<std::size_t>(k)], F.log.coeff({k}), 6));
  }
  auto longer = formal_group_from_curve(WeierstrassCurve::make(ctx, 1, 0, 1, 0, 1));
  CHECK_THROWS_AS(log_coefficients(longer, 200, 10), Error);
}

TEST_CASE("completed-square model is a Z_p-isomorphic curve") {
  auto ctx = Context::make(5, 8, 12);
  auto E = WeierstrassCurve::make(ctx, 1, -1, 1, 2, 3);
  auto S = E.completed_square_model();
  CHECK(S.is_y2_eq_cubic());
  CHECK(count_points_ap(S).a_p == count_points_ap(E).a_p);
}

TEST_CASE("point counts") {
  auto ctx = Context::make(5, 8, 12);
  auto a = count_points_ap(WeierstrassCurve::parse(ctx, "1,1"));
  CHECK(a.point_count == 9);
  CHECK(a.a_p == -3);
  CHECK(a.ordinary);
  auto b = count_points_ap(WeierstrassCurve::parse(ctx, "-1,0"));
  CHECK(b.point_count == 8);
  CHECK(b.a_p == -2);
  CHECK(b.ordinary);
  auto c = count_points_ap(WeierstrassCurve::parse(ctx, "0,1"));
  CHECK(c.point_count == 6);
  CHECK(c.a_p == 0);
  CHECK_FALSE(c.ordinary);
  CHECK(count_points_ap(WeierstrassCurve::parse(ctx, "1,1")).a_p == a.a_p);
  CHECK_THROWS_AS(WeierstrassCurve::parse(ctx, "0,0"), Error);
  CHECK_THROWS_AS(WeierstrassCurve::parse(ctx, "1,x"), Error);
  CHECK_THROWS_AS(WeierstrassCurve::parse(ctx, "1,2,3"), Error);
}
