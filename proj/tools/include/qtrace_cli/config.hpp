#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "qtrace/positivity.hpp"

namespace qtrace::cli {

/// Input error with a "path:line: message" rendering.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

/// ProblemConfig. Defaults: W = 32, samples = 4096, gram_size = 8, seed = 42, c = 1.
struct ProblemConfig {
  ClassifyOptions options;
};

/// Parses and validates a UTF-8 JSON config. `source` names the input in diagnostics.
ProblemConfig parse_config(const std::string& text, const std::string& source = "config");
ProblemConfig load_config(const std::string& path);

}  // namespace qtrace::cli
