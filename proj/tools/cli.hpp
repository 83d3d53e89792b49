#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace refine::cli {

struct RunConfig {
  std::string subcommand;
  std::string system_path;
  bool auto_close = false;
  std::string formula;
  int k = 0;
  std::size_t max_labels = 16;
  std::size_t max_steps = 5000;
  std::string format = "json";  // json | text
  std::uint64_t seed = 0;
};

// Exit codes: prove-grammar 0 Valid, 1 Refuted, 3 Unknown; prove-stit 0
// Proved, 1 Refuted; interpolate 0 Interpolated, 1 NotDerivable, 3 Unknown;
// check-proof / check-model / fixtures 0 ok, 1 rejected. Input and usage
// errors give 2 everywhere. `args` excludes the program name.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace refine::cli
