#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

namespace qavmc::cli {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;
  std::vector<std::string> sets;  // dotted.path=json-value (flags win over the file)
};

/// Config validation failures carry exit code 1 (numerical failures exit 2).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

extern const std::vector<std::string> kSubcommands;  // gap-scan, gap-size, ...

/// Load + validate the config file, apply overrides, run one subcommand.
/// Returns the process exit code (0 success, 1 validation, 2 numerical).
int run_subcommand(const std::string& name, const std::string& config_path,
                   const Overrides& overrides);

/// Same entry point with an in-memory config (tests, bindings).
int run_subcommand_json(const std::string& name, nlohmann::json config);

}  // namespace qavmc::cli
