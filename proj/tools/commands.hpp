#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace trajthermo::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 2,
  kExitNumerical = 3,
};

struct RunOptions {
  std::string command;
  std::optional<std::string> config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
};

const std::vector<std::string>& command_names();

/// Runs one command, writing its artifacts and manifest.json into
/// opts.out_dir. Errors are reported on `log`; the return value is the
/// process exit status.
int run(const RunOptions& opts, std::ostream& log);

/// Argument parsing front end shared by the executable and the tests.
int cli_main(int argc, const char* const* argv);

}  // namespace trajthermo::cli
