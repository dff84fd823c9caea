#include <random>

#include "deltacrys/error.hpp"
#include "deltacrys/series.hpp"
#include "doctest.h"

using namespace deltacrys;

namespace {

constexpr std::uint64_t P = 5;
constexpr int R = 10;

PadicRational q(std::int64_t num, std::int64_t den = 1) { return PadicRational::from_fraction(P, R, num, den); }

TruncatedSeries var(const std::vector<std::string>& vars, int M, std::size_t i) {
  return TruncatedSeries::variable(P, vars, M, R, i);
}

// Exact check of one coefficient: difference is zero to at least R-2 digits.
bool coeff_is(const TruncatedSeries& s, const Exponents& e, const PadicRational& expected) {
  auto d = s.coeff(e) - expected;
  return d.is_zero() && d.absolute_precision() >= R - 2 + std::min(0, expected.valuation());
}

}  // namespace

TEST_CASE("series arithmetic identities") {
  std::vector<std::string> xy{"x", "y"};
  auto x = var(xy, 6, 0), y = var(xy, 6, 1);
  auto prod = (x + y) * (x - y);
  CHECK(prod.size() == 3);
  CHECK(coeff_is(prod, {2, 0}, q(1)));
  CHECK(coeff_is(prod, {0, 2}, q(-1)));
  CHECK(prod.coeff({1, 1}).is_zero());
  CHECK((prod * TruncatedSeries::zero_like(prod)).size() == 0);

  std::vector<std::string> t{"x"};
  auto X = var(t, 3, 0);
  auto one = TruncatedSeries::constant_like(X, q(1));
  auto f = one + X + X * X + X * X * X;
  auto g = f * (one - X);
  CHECK(g.size() == 4);  // zero-at-precision coefficients are kept
  CHECK(coeff_is(g, {0}, q(1)));
  for (int k = 1; k <= 3; ++k) CHECK(g.coeff({k}).is_zero());

  auto z = TruncatedSeries::variable(P, {"z"}, 3, R, 0);
  CHECK_THROWS_AS(X + z, Error);
}

TEST_CASE("composition") {
  std::vector<std::string> xy{"x", "y"};
  auto x = var(xy, 6, 0), y = var(xy, 6, 1);
  auto t = var({"t"}, 6, 0);
  auto sq = (t * t).compose({x + y});
  CHECK(coeff_is(sq, {2, 0}, q(1)));
  CHECK(coeff_is(sq, {1, 1}, q(2)));
  CHECK(coeff_is(sq, {0, 2}, q(1)));
  auto g = x * y + x.pow(3);
  auto id = t.compose({g});
  CHECK(residual_valuation(id, g) >= R);

  // log(1+t) at 5x to degree 3.
  auto tt = var({"t"}, 3, 0);
  auto lg = tt - (tt * tt).scaled(q(1, 2)) + tt.pow(3).scaled(q(1, 3));
  auto xx = var({"x"}, 3, 0);
  auto c = lg.compose({xx.scaled(5)});
  CHECK(coeff_is(c, {1}, q(5)));
  CHECK(coeff_is(c, {2}, q(-25, 2)));
  CHECK(coeff_is(c, {3}, q(125, 3)));

  auto shifted = TruncatedSeries::constant_like(xx, q(1)) + xx;
  CHECK_THROWS_AS(lg.compose({shifted}), Error);
}

TEST_CASE("multivariate composition agrees with term-by-term substitution") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coef(-20, 20);
  std::vector<std::string> ab{"a", "b"};
  std::vector<std::string> uvw{"u", "v", "w"};
  const int M = 7;
  for (int trial = 0; trial < 10; ++trial) {
    TruncatedSeries f(P, ab, M, R);
    for (int i = 0; i <= M; ++i)
      for (int j = 0; i + j <= M; ++j)
        if (i + j > 0) f.add_term({i, j}, q(coef(rng)));
    std::vector<TruncatedSeries> args;
    for (int k = 0; k < 2; ++k) {
      TruncatedSeries s(P, uvw, M, R);
      for (int i = 0; i <= 2; ++i)
        for (int j = 0; i + j <= 2; ++j)
          for (int l = 0; i + j + l <= 2; ++l)
            if (i + j + l > 0) s.add_term({i, j, l}, q(coef(rng)));
      args.push_back(s);
    }
    auto fast = f.compose(args);
    auto slow = TruncatedSeries::zero_like(args[0]);
    for (const auto& term : f.terms()) {
      auto e = f.exponents(term.key);
      slow += (args[0].pow(static_cast<unsigned>(e[0])) * args[1].pow(static_cast<unsigned>(e[1]))).scaled(term.c);
    }
    REQUIRE(residual_valuation(fast, slow) >= R - 1);
  }
}

TEST_CASE("reversion") {
  auto t = var({"t"}, 8, 0);
  CHECK(residual_valuation(t.reversion(), t) >= R);

  // Lagrange inversion oracle: the inverse of t + t^2 has coefficients
  // (-1)^(n+1) Catalan(n-1).
  auto g = (t + t * t).reversion();
  std::int64_t catalan = 1;
  for (int n = 1; n <= 8; ++n) {
    if (n > 1) catalan = catalan * 2 * (2 * (n - 1) - 1) / n;
    const std::int64_t sign = (n % 2 == 1) ? 1 : -1;
    CHECK(coeff_is(g, {n}, q(sign * catalan)));
  }

  // Round trip through the multiplicative log.
  TruncatedSeries lg(P, {"t"}, 8, R);
  for (int k = 1; k <= 8; ++k) lg.add_term({k}, q((k % 2) ? 1 : -1, k));
  auto ex = lg.reversion();
  CHECK(lg.compose({ex}).coeff({1}) == q(1));
  CHECK(residual_valuation(ex.compose({lg}), t) >= R - 2);
  CHECK(residual_valuation(lg.compose({ex}), t) >= R - 2);

  CHECK_THROWS_AS((t.scaled(5) + t * t).reversion(), Error);
}

TEST_CASE("calculus and substitution helpers") {
  std::vector<std::string> xy{"x", "y"};
  auto x = var(xy, 6, 0), y = var(xy, 6, 1);
  auto f = x.pow(3) * y + y.scaled(4);
  auto fx = f.derivative(0);
  CHECK(coeff_is(fx, {2, 1}, q(3)));
  auto back = fx.integral(0);
  CHECK(coeff_is(back, {3, 1}, q(1)));
  CHECK(f.substitute_zero(0).size() == 1);
  auto e = f.embed({"a", "x", "y"}, {1, 2});
  CHECK(coeff_is(e, {0, 3, 1}, q(1)));
  auto diag = f.embed({"t"}, {0, 0});
  CHECK(coeff_is(diag, {4}, q(1)));
  CHECK(coeff_is(diag, {1}, q(4)));
}
