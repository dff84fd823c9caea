#include <random>

#include "deltacrys/error.hpp"
#include "deltacrys/witt.hpp"
#include "doctest.h"

using namespace deltacrys;

namespace {

BigInt binom(int n, int k) {
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

WittVector random_witt(const Context& ctx, std::size_t len, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> dist(0, ipow(ctx.p, ctx.N) - 1);
  WittVector w;
  for (std::size_t i = 0; i < len; ++i) w.a.push_back(PadicScalar::from_big(ctx.p, ctx.N, BigInt(dist(rng))));
  return w;
}

bool same(const WittVector& a, const WittVector& b) {
  if (a.length() != b.length()) return false;
  for (std::size_t i = 0; i < a.length(); ++i)
    if (!(a.a[i] == b.a[i])) return false;
  return true;
}

}  // namespace

TEST_CASE("structure polynomials at level 1") {
  auto ctx = Context::make(5, 6, 4);
  auto set = structure_polynomials(ctx, 1);
  // Oracle: S_1 = X_1 + Y_1 - (1/p) sum_{0<k<p} C(p,k) X_0^k Y_0^{p-k}.
  ExactPoly s1(4);
  s1.add_term({0, 1, 0, 0}, 1);
  s1.add_term({0, 0, 0, 1}, 1);
  for (int k = 1; k < 5; ++k) s1.add_term({k, 0, 5 - k, 0}, -binom(5, k) / 5);
  CHECK(set->S[1] == s1);
  CHECK(set->S[1].coeff({4, 0, 1, 0}) == -1);
  CHECK(set->S[1].coeff({3, 0, 2, 0}) == -2);

  ExactPoly p1(4);
  p1.add_term({5, 0, 0, 1}, 1);
  p1.add_term({0, 1, 5, 0}, 1);
  p1.add_term({0, 1, 0, 1}, 5);
  CHECK(set->P[1] == p1);

  CHECK(set->S[0] == ExactPoly::variable(4, 0) + ExactPoly::variable(4, 2));
  CHECK(set->P[0] == ExactPoly::variable(4, 0) * ExactPoly::variable(4, 2));
  CHECK(set->Neg[1] == -ExactPoly::variable(4, 1));  // p odd
}

TEST_CASE("ghost components") {
  auto ctx = Context::make(5, 6, 4);
  auto g = ghost(witt_from_ints(ctx, {2, 1}), 5);
  CHECK(g[0] == 2);
  CHECK(g[1] == 37);
  auto t = ghost(witt_from_ints(ctx, {3, 0, 0}), 5);
  CHECK(t[1] == 243);
  CHECK(t[2] == BigInt("847288609443"));  // 3^25
  auto v = ghost(witt_from_ints(ctx, {0, 7}), 5);
  CHECK(v[0] == 0);
  CHECK(v[1] == 35);
}

TEST_CASE("Witt arithmetic examples") {
  auto ctx = Context::make(5, 6, 4);
  auto one = witt_from_ints(ctx, {1, 0});
  auto two = witt_add(ctx, one, one);
  CHECK(two.to_string() == "[2, -6]");
  auto z = witt_add(ctx, one, witt_from_ints(ctx, {-1, 0}));
  CHECK(z.to_string() == "[0, 0]");
  auto a = witt_from_ints(ctx, {17, -4});
  CHECK(same(witt_add(ctx, a, witt_from_ints(ctx, {0, 0})), a));
  CHECK_THROWS_AS(witt_add(ctx, a, witt_from_ints(ctx, {1, 2, 3})), Error);
  CHECK(witt_frobenius(ctx, two).to_string() == "[2]");
  CHECK(witt_truncate(witt_from_ints(ctx, {4, 5, 6})).to_string() == "[4, 5]");
  CHECK(witt_verschiebung(witt_from_ints(ctx, {3})).to_string() == "[0, 3]");
  CHECK(teichmuller(PadicScalar::from_int(5, 6, 9), 3).to_string() == "[9, 0, 0]");
  CHECK_THROWS_AS(witt_frobenius(ctx, witt_from_ints(ctx, {3})), Error);
  CHECK_THROWS_AS(witt_truncate(witt_from_ints(ctx, {3})), Error);
}

TEST_CASE("delta map examples") {
  auto x = [](std::int64_t v) { return PadicScalar::from_int(5, 8, v); };
  CHECK(delta_map(x(2)).signed_residue() == -6);
  CHECK(delta_map(x(2)).precision() == 7);
  CHECK(delta_map(x(0)).is_zero());
  CHECK(delta_map(x(1)).is_zero());
  CHECK(delta_map(x(5)).signed_residue() == -624);
  // (32 + 243 - 3125)/5
  CHECK(carry_polynomial(x(2), x(3)).signed_residue() == -570);
  CHECK(delta_map(x(5)) == delta_map(x(2)) + delta_map(x(3)) + carry_polynomial(x(2), x(3)));
  CHECK(carry_polynomial(x(1), x(1)) == delta_map(x(2)));
  auto ctx = Context::make(5, 8, 4);
  auto rep = check_delta_axioms(ctx, 200, 3);
  CHECK(rep.ok());
  CHECK(rep.samples == 200);
}

TEST_CASE("property: Witt ring axioms, backend agreement and operator identities") {
  for (std::uint64_t p : {3ull, 5ull, 7ull}) {
    auto ctx = Context::make(p, 6, 4);
    std::mt19937_64 rng(1000 + p);
    for (int it = 0; it < 500; ++it) {
      const std::size_t len = 1 + static_cast<std::size_t>(it % 3);
      auto a = random_witt(ctx, len, rng), b = random_witt(ctx, len, rng), c = random_witt(ctx, len, rng);
      auto ab = witt_add(ctx, a, b);
      REQUIRE(same(ab, witt_add(ctx, b, a)));
      REQUIRE(same(witt_add(ctx, ab, c), witt_add(ctx, a, witt_add(ctx, b, c))));
      auto m = witt_mul(ctx, a, b);
      REQUIRE(same(m, witt_mul(ctx, b, a)));
      REQUIRE(same(witt_mul(ctx, a, witt_add(ctx, b, c)), witt_add(ctx, m, witt_mul(ctx, a, c))));
      if (it % 5 == 0) REQUIRE(same(witt_mul(ctx, m, c), witt_mul(ctx, a, witt_mul(ctx, b, c))));
      REQUIRE(same(ab, witt_arith(ctx, a, b, WittOp::Add, WittBackend::GhostLift)));
      REQUIRE(same(m, witt_arith(ctx, a, b, WittOp::Mul, WittBackend::GhostLift)));
      REQUIRE(same(witt_neg(ctx, a), witt_arith(ctx, a, a, WittOp::Neg, WittBackend::GhostLift)));
      REQUIRE(witt_add(ctx, a, witt_neg(ctx, a)).a[0].is_zero());
      if (len >= 2) {
        // F(V(a)) is p times a on the ghost side.
        auto fv = witt_frobenius(ctx, witt_verschiebung(witt_truncate(a)));
        auto gfv = ghost(fv, p);
        auto ga = ghost(witt_truncate(a), p);
        const BigInt mod = BigInt(ipow(p, ctx.N - 1));
        for (std::size_t i = 0; i < gfv.size(); ++i) REQUIRE((gfv[i] - BigInt(p) * ga[i]) % mod == 0);
      }
      if (len == 3) REQUIRE(same(witt_truncate(witt_frobenius(ctx, a)), witt_frobenius(ctx, witt_truncate(a))));
    }
  }
}

TEST_CASE("property: delta axioms at p in {3,5,7}") {
  for (std::uint64_t p : {3ull, 5ull, 7ull}) {
    auto rep = check_delta_axioms(Context::make(p, 10, 4), 500, p);
    CHECK(rep.ok());
  }
}
