#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli/config.hpp"

namespace floqbog::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumerical = 3, kExitInvariant = 4 };

struct CommandResult {
    std::vector<std::string> files; ///< written paths, the sidecar last
    nlohmann::json summary;
};

CommandResult cmd_spectrum(const RunConfig& cfg);
CommandResult cmd_stability_grid(const RunConfig& cfg);
CommandResult cmd_phase_diagram(const RunConfig& cfg);
CommandResult cmd_winding(const RunConfig& cfg);
CommandResult cmd_ws(const RunConfig& cfg);
CommandResult cmd_chain(const RunConfig& cfg);
CommandResult cmd_evolve(const RunConfig& cfg);
CommandResult cmd_scan_path(const RunConfig& cfg);

const std::vector<std::string>& command_names();

/// Runs one command, prints its summary to `out` and errors to `err`, and
/// maps exceptions onto exit codes.
int run_command(const std::string& name, const RunConfig& cfg, std::ostream& out, std::ostream& err);

} // namespace floqbog::cli
