#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "sensornet/config.hpp"

namespace sensornet {

struct CliOptions {
  std::optional<std::uint64_t> seed;  // overrides the config seed
  std::optional<std::string> out_dir;
  bool quiet = false;
};

// Exit codes: 0 success, 1 usage/parse, 2 mathematical infeasibility,
// 3 simulation failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitSimulation = 3;

int cmd_solve(const RunConfig& config, const CliOptions& cli, std::ostream& out);
int cmd_simulate(const RunConfig& config, const CliOptions& cli, std::ostream& out);
int cmd_sweep(const RunConfig& config, const CliOptions& cli, std::ostream& out);
int cmd_place(const RunConfig& config, const CliOptions& cli, std::ostream& out);

// Maps a thrown error to the exit-code contract above.
int run_command(const std::string& name, const RunConfig& config, const CliOptions& cli,
                std::ostream& out, std::ostream& err);

}  // namespace sensornet
