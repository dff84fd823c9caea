#include "deltacrys/cli.hpp"
#include "doctest.h"

using namespace deltacrys;

TEST_CASE("witt calculator examples") {
  cli::Config cfg;
  auto r = cli::cmd_witt(cfg, "[1,0] + [1,0]");
  CHECK(r.value.to_string() == "[2, -6]");
  CHECK(r.text() == "[2, -6]\nghost (2, 2)");
  CHECK(cli::cmd_witt(cfg, "T([1,2,3])").value.to_string() == "[1, 2]");
  CHECK(cli::cmd_witt(cfg, "F([2,-6])").value.to_string() == "[2]");
  CHECK(cli::cmd_witt(cfg, "V([3]) * [1, 0]").value.to_string() == "[0, 3]");
  CHECK(cli::cmd_witt(cfg, "([1,1] + [2,0]) * [0,1]").ghost.size() == 2);
}

TEST_CASE("witt calculator rejects bad input") {
  cli::Config cfg;
  for (const char* bad : {"[1,2", "[1,,2]", "G([1])", "[1] +", "[1,2] + [1]", "F([1])", "[1] [2]"}) {
    CAPTURE(bad);
    try {
      cli::cmd_witt(cfg, bad);
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(cli::exit_code_for(e) == cli::kBadInput);
    }
  }
}

TEST_CASE("exit codes") {
  CHECK(cli::exit_code_for(Error(ErrorKind::PrecisionExhausted, "")) == cli::kPrecisionExhausted);
  CHECK(cli::exit_code_for(Error(ErrorKind::AmbiguousRank, "")) == cli::kPrecisionExhausted);
  CHECK(cli::exit_code_for(Error(ErrorKind::BadReduction, "")) == cli::kBadInput);
  CHECK(cli::exit_code_for(Error(ErrorKind::IdentityViolation, "")) == cli::kCheckFailure);
  cli::Config cfg;
  cfg.curve = "0,0";
  CHECK_THROWS_AS(cli::cmd_analyze(cfg), Error);
}

TEST_CASE("p-adic values carry their precision") {
  auto v = cli::to_pvalue(PadicRational::from_int(5, 20, -10), 8);
  CHECK(v == cli::PValue{-2, 1, 8});
  CHECK(cli::to_string(v, 5) == "-2*5^1 + O(5^8)");
  CHECK(cli::to_pvalue(PadicRational::from_int(5, 20, 5 * 5 * 5), 2) == cli::PValue{0, 2, 2});
  CHECK(cli::to_pvalue(PadicRational::exact_zero(5), 8) == cli::PValue{0, 8, 8});
}

TEST_CASE("analysis report of y^2 = x^3 - x round-trips through JSON") {
  cli::Config cfg;
  cfg.curve = "-1,0";
  auto r = cli::cmd_analyze(cfg);
  CHECK(r.schema == 1);
  CHECK(r.a_p == -2);
  CHECK(r.is_CL);
  CHECK(r.delta_rank == 1);
  CHECK(r.ranks == cli::Ranks{1, 2, 1});
  CHECK(r.kedlaya.trace == cli::PValue{-2, 0, 8});
  CHECK(r.ok());
  CHECK(cli::analysis_from_json(cli::to_json(r)) == r);
  CHECK_THROWS_AS(cli::analysis_from_json("{\"schema\": 1}"), Error);
}

TEST_CASE("verify reports for the three group kinds") {
  cli::Config cfg;
  for (const char* g : {"ga", "gm", "curve"}) {
    cfg.group = g;
    auto r = cli::cmd_verify(cfg);
    CHECK(r.ok());
    CHECK(cli::verify_from_json(cli::to_json(r)) == r);
  }
  cfg.group = "ga";
  cfg.p = 3;
  CHECK(cli::cmd_verify(cfg).ok());
  cfg.group = "gx";
  CHECK_THROWS_AS(cli::cmd_verify(cfg), Error);
}

TEST_CASE("runs are deterministic") {
  cli::Config cfg;
  cfg.group = "gm";
  cfg.seed = 99;
  CHECK(cli::to_json(cli::cmd_verify(cfg)) == cli::to_json(cli::cmd_verify(cfg)));
  cfg.curve = "0,1";
  CHECK(cli::cmd_kedlaya(cfg) == cli::cmd_kedlaya(cfg));
}
