#pragma once

#include "debtrun_cli/config.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace debtrun::cli {

struct CommandOutput {
    std::vector<std::pair<std::string, std::string>> files;  ///< name, content
    std::vector<std::string> warnings;
    Json summary = Json::object();
};

CommandOutput cmd_barriers(const RunConfig& config);
CommandOutput cmd_default_prob(const RunConfig& config);
CommandOutput cmd_simulate(const RunConfig& config);
CommandOutput cmd_compare_tenor(const RunConfig& config);

/// Dispatches by name: barriers, default-prob, simulate, compare-tenor.
CommandOutput run_command(const std::string& command, const RunConfig& config);

/// Manifest of a finished run: resolved config, its hash, output hashes.
std::string manifest_json(const std::string& command, const RunConfig& config, const CommandOutput& out);

/// Gnuplot script drawing every CSV output against its first column.
std::string gnuplot_script(const CommandOutput& out);

/// Writes all outputs and the manifest into `dir`, each file atomically.
void write_run(const std::filesystem::path& dir, const std::string& command, const RunConfig& config,
               CommandOutput& out, bool gnuplot);

/// Entry point of the executable; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace debtrun::cli
