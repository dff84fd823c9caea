#include <random>

#include "deltacrys/context.hpp"
#include "deltacrys/error.hpp"
#include "deltacrys/padic.hpp"
#include "doctest.h"

using namespace deltacrys;

TEST_CASE("context validation") {
  CHECK_NOTHROW(Context::make(5, 8, 12));
  CHECK_THROWS_AS(Context::make(2, 8, 12), Error);
  CHECK_THROWS_AS(Context::make(9, 8, 12), Error);
  CHECK_THROWS_AS(Context::make(5, 1, 12), Error);
  CHECK_THROWS_AS(Context::make(5, 8, 0), Error);
  CHECK_THROWS_AS(Context::make(5, 40, 4), Error);
}

TEST_CASE("scalar arithmetic at p=5, N=4") {
  auto two = PadicScalar::from_int(5, 4, 2);
  auto three = PadicScalar::from_int(5, 4, 3);
  CHECK((two * three).residue() == 6);
  CHECK(two.inverse().residue() == 313);
  CHECK((two * two.inverse()).residue() == 1);
  CHECK((-two).signed_residue() == -2);
  CHECK_THROWS_AS(PadicScalar::from_int(5, 4, 0).inverse(), Error);
  CHECK(PadicScalar::from_int(5, 4, 250).valuation() == 3);
  CHECK(PadicScalar::from_int(5, 4, 625).valuation() == 4);  // zero: reported as >= N
  CHECK(PadicScalar::from_int(5, 4, 50).divide_by_p(2).residue() == 2);
  CHECK(PadicScalar::from_int(5, 4, 50).divide_by_p(2).precision() == 2);
}

TEST_CASE("rational inverse of a uniformizer") {
  auto five = PadicRational::from_int(5, 4, 5);
  auto inv = five.inverse();
  CHECK(inv.valuation() == -1);
  CHECK(inv.unit_residue() == 1);
  CHECK(inv.to_string() == "1*5^-1 + O(5^3)");
  CHECK_THROWS_AS(PadicRational::zero(5, 4).inverse(), Error);
  auto half = PadicRational::from_fraction(5, 4, 1, 2);
  CHECK(half.unit_residue() == 313);
}

TEST_CASE("rational precision tracking") {
  auto a = PadicRational::from_int(5, 4, 1);
  auto b = PadicRational::from_int(5, 4, 6);
  auto d = b - a;  // 5: cancellation costs one relative digit
  CHECK(d.valuation() == 1);
  CHECK(d.absolute_precision() == 4);
  auto z = a - a;
  CHECK(z.is_zero());
  CHECK_FALSE(z.is_exact_zero());
  CHECK(z.absolute_precision() == 4);
  auto small = PadicRational::from_int(5, 4, 1).shifted(6);
  CHECK((a + small) == a);
  CHECK((a + small).absolute_precision() == 4);
  CHECK(((a + PadicRational::exact_zero(5)) == a));
}

TEST_CASE("property: ring axioms and valuation additivity on random triples") {
  std::mt19937_64 rng(20261017);
  for (std::uint64_t p : {3ull, 5ull, 7ull}) {
    const int N = 8;
    const std::uint64_t m = ipow(p, N);
    std::uniform_int_distribution<std::uint64_t> dist(0, m - 1);
    for (int it = 0; it < 500; ++it) {
      auto a = PadicScalar::from_big(p, N, BigInt(dist(rng)));
      auto b = PadicScalar::from_big(p, N, BigInt(dist(rng)));
      auto c = PadicScalar::from_big(p, N, BigInt(dist(rng)));
      REQUIRE(((a * b) * c) == (a * (b * c)));
      REQUIRE(((a + b) + c) == (a + (b + c)));
      REQUIRE((a * (b + c)) == (a * b + a * c));
      REQUIRE((a * b) == (b * a));
      if (!a.is_zero() && !b.is_zero() && a.valuation() + b.valuation() < N)
        REQUIRE((a * b).valuation() == a.valuation() + b.valuation());
      if (a.is_unit()) REQUIRE((a * a.inverse()).residue() == 1);

      auto ra = PadicRational::from_scalar(a);
      auto rb = PadicRational::from_scalar(b);
      if (!ra.is_zero() && !rb.is_zero()) {
        REQUIRE((ra * rb).valuation() == ra.valuation() + rb.valuation());
        REQUIRE(((ra / rb) * rb) == ra);
      }
    }
  }
}

TEST_CASE("purity: identical inputs give identical outputs") {
  auto a = PadicRational::from_fraction(7, 6, 22, 49);
  auto b = PadicRational::from_fraction(7, 6, 22, 49);
  CHECK((a * a).to_string() == (b * b).to_string());
}
