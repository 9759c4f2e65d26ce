#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"

namespace sdp::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitExtent = 3;

const std::vector<std::string>& command_names();

// Runs one subcommand and writes results.jsonl, summary.csv,
// config.resolved.txt and timing.txt into out_dir. Throws the library error
// types; run_cli maps them to exit codes.
int run_command(const std::string& command, const ExperimentConfig& config, const std::string& out_dir,
                std::ostream& log);

int run_cli(int argc, char** argv);

// Self-test oracles; each line is one comparison.
struct SelfCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};
std::vector<SelfCheck> run_selftest();

}  // namespace sdp::app
