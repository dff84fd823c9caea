#include <iostream>

#include "CLI11.hpp"
#include "deltacrys/cli.hpp"
#include "deltacrys/error.hpp"

using namespace deltacrys;

namespace {

void common_flags(CLI::App* app, cli::Config& cfg) {
  app->add_option("--p", cfg.p, "odd prime");
  app->add_option("--prec", cfg.prec, "p-adic precision N");
  app->add_option("--deg", cfg.deg, "truncation degree M (0 picks the default)");
  app->add_option("--curve", cfg.curve, "a4,a6 or a1,a2,a3,a4,a6");
  app->add_option("--order", cfg.order, "character order")->check(CLI::Range(0, 2));
  app->add_option("--group", cfg.group, "ga, gm or curve")->check(CLI::IsMember({"ga", "gm", "curve"}));
  app->add_flag("--json", cfg.json, "machine-readable output");
  app->add_option("--seed", cfg.seed, "seed for randomized axiom checks");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"delta characters and crystalline Frobenius of elliptic formal groups"};
  app.require_subcommand(1);
  cli::Config cfg;
  std::string expr;

  auto* analyze = app.add_subcommand("analyze", "full pipeline on a curve, with comparison checks");
  auto* verify = app.add_subcommand("verify", "jet, fundamental character, delta axiom and differential identities");
  auto* witt = app.add_subcommand("witt", "evaluate a Witt vector expression");
  auto* chars = app.add_subcommand("characters", "lattice of delta characters of the given order");
  auto* kedlaya = app.add_subcommand("kedlaya", "crystalline Frobenius by Monsky-Washnitzer reduction");
  for (auto* s : {analyze, verify, witt, chars, kedlaya}) common_flags(s, cfg);
  witt->add_option("expr", expr, "e.g. \"[1,0] + [1,0]\"")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : cli::kBadInput;
  }

  try {
    if (*analyze) {
      const auto r = cli::cmd_analyze(cfg);
      std::cout << (cfg.json ? cli::to_json(r) : cli::to_text(r)) << "\n";
      return r.ok() ? cli::kPass : cli::kCheckFailure;
    }
    if (*verify) {
      const auto r = cli::cmd_verify(cfg);
      std::cout << (cfg.json ? cli::to_json(r) : cli::to_text(r)) << "\n";
      return r.ok() ? cli::kPass : cli::kCheckFailure;
    }
    if (*witt) {
      std::cout << cli::cmd_witt(cfg, expr).text() << "\n";
      return cli::kPass;
    }
    if (*chars) {
      std::cout << cli::cmd_characters(cfg);
      if (cfg.json) std::cout << "\n";
      return cli::kPass;
    }
    if (*kedlaya) {
      std::cout << cli::cmd_kedlaya(cfg);
      if (cfg.json) std::cout << "\n";
      return cli::kPass;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::exit_code_for(e);
  }
  return cli::kBadInput;
}
