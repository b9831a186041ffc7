#include <iostream>

#include <CLI11.hpp>

#include "qtrace_cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace qtrace::cli;
  CLI::App app{"qtrace: positive twisted traces on q-Weyl algebras"};
  app.require_subcommand(1);

  CommandArgs args;
  std::string out_path;
  std::uint64_t seed = 0;
  int max_index = 0;
  int trials = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", args.config_path, "problem configuration (JSON)")->required();
    sub->add_option("--out", out_path, "write the report here instead of stdout");
    sub->add_option("--seed", seed, "override the config seed");
  };
  CLI::App* classify = app.add_subcommand("classify", "classify positive traces and emit a JSON report");
  common(classify);
  CLI::App* moments = app.add_subcommand("moments", "moment table c_i as CSV (or JSON for a .json --out)");
  common(moments);
  moments->add_option("--max-index", max_index, "largest |i| to print (default W)");
  CLI::App* verify = app.add_subcommand("verify", "twisted-trace, linear-system and quasi-periodicity checks");
  common(verify);
  verify->add_option("--trials", trials, "random element pairs for the twisted-trace check");
  CLI::App* circle = app.add_subcommand("emit-circle", "sample w or z^k P(z) w(qz) on the unit circle as CSV");
  common(circle);
  circle->add_option("--function", args.function, "w or wP")->check(CLI::IsMember({"w", "wP"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (sub->count("--out")) args.out_path = out_path;
  if (sub->count("--seed")) args.seed = seed;
  if (sub == moments && sub->count("--max-index")) args.max_index = max_index;
  if (sub == verify && sub->count("--trials")) args.trials = trials;

  if (sub == classify) return cmd_classify(args, std::cout, std::cerr);
  if (sub == moments) return cmd_moments(args, std::cout, std::cerr);
  if (sub == verify) return cmd_verify(args, std::cout, std::cerr);
  return cmd_emit_circle(args, std::cout, std::cerr);
}
