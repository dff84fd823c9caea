#include "deltacrys/crystalline.hpp"
#include "deltacrys/error.hpp"
#include "doctest.h"

using namespace deltacrys;

namespace {

PadicRational q(std::int64_t v) { return PadicRational::from_int(5, 20, v); }

}  // namespace

TEST_CASE("Kedlaya trace and determinant match point counts") {
  auto ctx = Context::make(5, 8, 12);
  struct Row {
    const char* curve;
    std::int64_t a_p;
    int hodge;
  };
  // a_p by exhaustive counting over F_5; x^3 - x has the automorphism x -> -x.
  for (const Row& r : {Row{"1,1", -3, 0}, Row{"-1,0", -2, 1}, Row{"0,1", 0, 0}}) {
    CAPTURE(r.curve);
    auto E = WeierstrassCurve::parse(ctx, r.curve);
    CHECK(count_points_ap(E).a_p == r.a_p);
    auto Fm = kedlaya_frobenius(E);
    CHECK(Fm.precision == ctx.N);
    auto cp = char_poly(Fm.entries);
    CHECK((cp[1] + q(r.a_p)).valuation() >= ctx.N - 2);
    CHECK((cp[0] - q(5)).valuation() >= ctx.N - 2);
    CHECK(hodge_frobenius_intersection(Fm).dim == r.hodge);
  }
}

TEST_CASE("long Weierstrass input goes through the completed-square model") {
  auto ctx = Context::make(7, 6, 12);
  auto E = WeierstrassCurve::parse(ctx, "1,0,1,1,0");
  auto Fm = kedlaya_frobenius(E);
  CHECK(Fm.curve.is_y2_eq_cubic());
  auto cp = char_poly(Fm.entries);
  CHECK((cp[1] + q(count_points_ap(E).a_p)).valuation() >= ctx.N - 2);
  CHECK((cp[0] - PadicRational::from_int(7, 20, 7)).valuation() >= ctx.N - 2);
}

TEST_CASE("more digits agree with fewer") {
  auto lo = kedlaya_frobenius(WeierstrassCurve::parse(Context::make(5, 8, 12), "1,1"));
  auto hi = kedlaya_frobenius(WeierstrassCurve::parse(Context::make(5, 10, 12), "1,1"));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK((lo.entries[i][j] - hi.entries[i][j]).valuation() >= lo.precision);
}

TEST_CASE("Kedlaya preconditions") {
  CHECK_THROWS_AS(kedlaya_frobenius(WeierstrassCurve::parse(Context::make(3, 8, 12), "1,1")), Error);
  CHECK_THROWS_AS(kedlaya_frobenius(WeierstrassCurve::parse(Context::make(5, 3, 12), "1,1")), Error);
}

TEST_CASE("Hodge intersection of an explicit matrix") {
  FrobeniusMatrix id;
  id.entries = {{q(1), q(0)}, {PadicRational::exact_zero(5), q(1)}};
  id.precision = 8;
  CHECK(hodge_frobenius_intersection(id).dim == 1);
  id.entries[1][0] = q(25);
  CHECK(hodge_frobenius_intersection(id).dim == 0);
  CHECK(hodge_frobenius_intersection(id).off_valuation == 2);
}

TEST_CASE("Newton slopes") {
  CHECK(newton_slopes({q(5), q(3)}) == std::vector<Slope>{Slope(0), Slope(1)});
  CHECK(newton_slopes({q(5), PadicRational::exact_zero(5)}) == std::vector<Slope>{Slope(1, 2), Slope(1, 2)});
  CHECK(newton_slopes({q(5), q(10)}) == std::vector<Slope>{Slope(1, 2), Slope(1, 2)});
  CHECK(newton_slopes({q(-5)}) == std::vector<Slope>{Slope(1)});
  CHECK(newton_slopes({q(125), q(5), q(1)}) == std::vector<Slope>{Slope(0), Slope(1), Slope(2)});
  CHECK(to_string(Slope(1, 2)) == "1/2");
}

TEST_CASE("comparison on the canonical lift and the supersingular curve") {
  auto ctx = Context::make(5, 8, 35);
  for (const char* c : {"-1,0", "0,1"}) {
    CAPTURE(c);
    auto rep = compare_isocrystals(WeierstrassCurve::parse(ctx, c));
    for (const auto& k : rep.checks) {
      INFO(k.name << ": " << k.detail);
      CHECK(k.pass);
    }
    CHECK(rep.ok());
  }
}
