// qtt: command-line front end for the timing-transfer simulator.
//
//   qtt sql               analytic SQL / squeezed sensitivities
//   qtt squeeze-spectrum  quadrature variances vs analysis frequency
//   qtt phase-scan        variance during an LO phase ramp (Monte-Carlo)
//   qtt timing            spectrum-analyzer timing experiment (Monte-Carlo)
//   qtt sweep             one-parameter sweep of the minimum detectable delay
//
// Exit codes: 0 success, 2 configuration/validation error, 3 runtime failure.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "qtt/cli/commands.hpp"
#include "qtt/cli/config.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    std::string preset;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::string emit;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config_path, "Configuration file (JSON, comments allowed)");
    cmd->add_option("--preset", o.preset, "Built-in preset (paper, paper-coherent, paper-squeezed, paper-vacuum)");
    cmd->add_option("--out", o.out_dir, "Output directory for artifacts");
    cmd->add_option("--seed", o.seed, "RNG seed (u64)");
    cmd->add_option("--emit", o.emit, "Artifacts to write: csv,svg");
}

qtt::cli::RunConfig build_config(const CommonOptions& o) {
    qtt::cli::RunConfig cfg;
    if (!o.preset.empty()) cfg = qtt::cli::load_preset(o.preset);
    if (!o.config_path.empty()) qtt::cli::apply_config_file(cfg, o.config_path);
    if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
    if (o.seed) cfg.seed = *o.seed;
    if (!o.emit.empty()) qtt::cli::apply_emit_list(cfg, o.emit);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace qtt::cli;

    CLI::App app{"Shaped-LO homodyne timing-transfer simulator"};
    app.require_subcommand(1);

    CommonOptions common;

    auto* sql = app.add_subcommand("sql", "SQL and minimum detectable delay table");
    add_common(sql, common);
    std::vector<double> sql_squeeze;
    std::vector<double> sql_power;
    sql->add_option("--squeeze-db", sql_squeeze, "Phase squeezing levels (positive dB)");
    sql->add_option("--power-uw", sql_power, "Signal powers (uW)");

    auto* spectrum = app.add_subcommand("squeeze-spectrum", "Quadrature variances vs analysis frequency");
    add_common(spectrum, common);
    std::vector<std::size_t> modes;
    spectrum->add_option("--modes", modes, "Supermode indices");

    auto* scan = app.add_subcommand("phase-scan", "Variance vs LO phase during a sawtooth scan");
    add_common(scan, common);

    auto* timing = app.add_subcommand("timing", "Monte-Carlo spectrum-analyzer timing experiment");
    add_common(timing, common);
    std::optional<double> applied_volts;
    std::optional<double> timing_squeeze;
    timing->add_option("--applied-volts", applied_volts, "PZT modulation amplitude (V)");
    timing->add_option("--squeeze-db", timing_squeeze, "Run a squeezed state with this phase squeezing (dB)");

    auto* sweep = app.add_subcommand("sweep", "One-parameter sweep");
    add_common(sweep, common);
    std::string axis;
    SweepSpec spec;
    sweep->add_option("--axis", axis, "power_uw | squeeze_db | pump_rate | omega_rad_s");
    sweep->add_option("--from", spec.from, "First axis value");
    sweep->add_option("--to", spec.to, "Last axis value");
    sweep->add_option("--points", spec.points, "Number of points");
    sweep->add_flag("--log", spec.log, "Logarithmic spacing");
    sweep->add_flag("--monte-carlo", spec.monte_carlo, "Also run the Monte-Carlo experiment per point");
    sweep->add_option("--threads", spec.threads, "Worker threads for --monte-carlo");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    RunConfig cfg;
    try {
        cfg = build_config(common);
        if (*sql) {
            if (!sql_squeeze.empty()) cfg.sql.squeeze_db = sql_squeeze;
            if (!sql_power.empty()) {
                cfg.sql.powers_w.clear();
                for (double p : sql_power) cfg.sql.powers_w.push_back(p * 1e-6);
            }
        }
        if (*spectrum && !modes.empty()) cfg.squeeze_spectrum.modes = modes;
        if (*timing) {
            if (applied_volts) cfg.experiment.applied_volts = *applied_volts;
            if (timing_squeeze) {
                cfg.experiment.state = qtt::montecarlo::QuantumState::Kind::Squeezed;
                cfg.experiment.squeeze_db = *timing_squeeze;
            }
        }
        if (*sweep) {
            if (!axis.empty()) {
                spec.axis = parse_sweep_axis(axis);
                if (!spec.axis) throw ConfigError("sweep: unknown axis '" + axis + "'");
            }
            validate_sweep(cfg, spec);
        }
        cfg.validate();
    } catch (const ConfigError& e) {
        std::cerr << "qtt: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        CommandResult result;
        if (*sql) result = cmd_sql(cfg);
        if (*spectrum) result = cmd_squeeze_spectrum(cfg);
        if (*scan) result = cmd_phase_scan(cfg);
        if (*timing) result = cmd_timing(cfg);
        if (*sweep) result = cmd_sweep(cfg, spec);
        write_artifacts(result, cfg);
        std::cout << result.stdout_text;
    } catch (const std::exception& e) {
        std::cerr << "qtt: runtime failure: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
