// In-process implementations of the qtrace subcommands. Each returns the process
// exit code and writes its report to `out` (or to args.out_path when set).

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace qtrace::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kInconclusive = 2,  // classify: inconclusive; verify: residual above tolerance
  kInfeasible = 3,
};

struct CommandArgs {
  std::string config_path;
  std::optional<std::string> out_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> max_index;
  std::optional<int> trials;
  std::string function = "w";
};

int cmd_classify(const CommandArgs& args, std::ostream& out, std::ostream& err);
int cmd_moments(const CommandArgs& args, std::ostream& out, std::ostream& err);
int cmd_verify(const CommandArgs& args, std::ostream& out, std::ostream& err);
int cmd_emit_circle(const CommandArgs& args, std::ostream& out, std::ostream& err);

}  // namespace qtrace::cli
