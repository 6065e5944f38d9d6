#ifndef COVDESIGN_TOOLS_COMMANDS_H_
#define COVDESIGN_TOOLS_COMMANDS_H_

#include <filesystem>
#include <optional>
#include <ostream>

#include "manifest.h"

namespace covdesign::cli {

// Each command takes its fully resolved configuration (absolute paths, every
// default filled in), writes its outputs and a manifest holding that same
// configuration. Errors are thrown as covdesign::Error.
void run_cluster(const json& config, std::ostream& log);
void run_optimize(const json& config, std::ostream& log);
void run_simulate(const json& config, std::ostream& log);
void run_analyze(const json& config, std::ostream& out);
void run_report(const json& config, std::ostream& out);

struct SimulateOverrides {
  std::optional<std::int64_t> replications;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::filesystem::path> output_dir;
};

// Reads a simulate config file and layers CLI overrides on top. Relative
// paths in the file are taken relative to the file's directory.
json resolve_simulate_config(const std::filesystem::path& path,
                             const SimulateOverrides& overrides);
json resolve_simulate_config(json raw, const std::filesystem::path& base_dir,
                             const SimulateOverrides& overrides);

// Re-executes the command recorded in a manifest. With `out_dir`, outputs
// are written there instead of their original location.
void rerun(const std::filesystem::path& manifest,
           const std::optional<std::filesystem::path>& out_dir,
           const std::optional<int>& workers, std::ostream& log);

// Full pipeline on a real edge list: Louvain at resolution 10, OCD at
// omega = 1, then the Monte Carlo comparison. Returns true when OCD has
// lower MSE than Ber at gamma = 2 under both simulation models.
bool paper_repro(const std::filesystem::path& edges, const std::filesystem::path& out_dir,
                 std::int64_t replications, int workers, std::ostream& log);

}  // namespace covdesign::cli

#endif  // COVDESIGN_TOOLS_COMMANDS_H_
