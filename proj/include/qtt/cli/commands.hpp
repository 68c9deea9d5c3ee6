#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qtt/cli/config.hpp"

namespace qtt::cli {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitRuntime = 3 };

struct Artifact {
    std::string filename;
    std::string content;
};

struct CommandResult {
    std::string stdout_text;  ///< the main CSV table
    std::vector<Artifact> artifacts;
};

enum class SweepAxis { PowerUw, SqueezeDb, PumpRate, OmegaRadS };

[[nodiscard]] std::optional<SweepAxis> parse_sweep_axis(std::string_view name);

struct SweepSpec {
    std::optional<SweepAxis> axis;
    double from = 0.0;
    double to = 0.0;
    std::size_t points = 0;
    bool log = false;
    bool monte_carlo = false;
    unsigned threads = 1;
};

/// Throws ConfigError for a missing or empty axis or out-of-domain range.
void validate_sweep(const RunConfig& cfg, const SweepSpec& sweep);

[[nodiscard]] CommandResult cmd_sql(const RunConfig& cfg);
[[nodiscard]] CommandResult cmd_squeeze_spectrum(const RunConfig& cfg);
[[nodiscard]] CommandResult cmd_phase_scan(const RunConfig& cfg);
[[nodiscard]] CommandResult cmd_timing(const RunConfig& cfg);
[[nodiscard]] CommandResult cmd_sweep(const RunConfig& cfg, const SweepSpec& sweep);

/// Writes the artifacts selected by cfg.emit_* into cfg.out_dir.
void write_artifacts(const CommandResult& result, const RunConfig& cfg);

}  // namespace qtt::cli
