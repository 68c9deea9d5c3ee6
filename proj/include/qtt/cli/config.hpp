#pragma once

// Run configuration for the command-line tool.
//
// Configuration text is JSON with comments allowed. Every physical quantity
// carries its unit in the key name (power_uw, rbw_khz, ...). Unknown keys are
// rejected. Parsing overlays a document onto an existing RunConfig, so a
// preset can be refined by a user file and then by command-line flags.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qtt/comb.hpp"
#include "qtt/montecarlo.hpp"
#include "qtt/squeezing.hpp"

namespace qtt::cli {

/// Malformed or invalid configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    montecarlo::QuantumState::Kind state = montecarlo::QuantumState::Kind::Coherent;
    double squeeze_db = 0.0;   ///< positive dB of phase squeezing on v₀
    double var_q1 = 1.0;
    double modulation_hz = 2e6;
    double applied_volts = 1.7;
    double pzt_coeff_s_per_v = 1.65e-20;
    double rbw_hz = 100e3;
    std::size_t n_averages = 64;
    double sample_rate_hz = 10e6;
    double duration_s = 0.1;
};

struct SpopoConfig {
    double zeta = 0.814;
    std::optional<double> gamma_s_rad_s;  ///< else π·rep_rate/finesse
    double finesse = 24.0;
    std::optional<double> pump_rate;      ///< else √(pump/threshold)
    double pump_w = 0.0;
    double threshold_w = 55e-3;
    std::vector<double> lambda_ratios{1.0, -0.7, 0.5, -0.35};
};

struct PhaseScanConfig {
    enum class Source { Levels, Spopo };
    Source source = Source::Levels;
    double var_p_db = 0.0;
    double var_q_db = 0.0;
    double analysis_hz = 1e6;
    std::size_t mode = 0;
    montecarlo::PhaseScanSpec scan;
};

struct SqueezeSpectrumConfig {
    double omega_min_rad_s = 1e4;
    double omega_max_rad_s = 1e9;
    std::size_t points = 61;
    std::vector<std::size_t> modes{0, 1};
};

struct SqlConfig {
    std::vector<double> powers_w{2e-6};
    std::vector<double> squeeze_db{0.0};
    /// Σ observed at the experiment's applied delay; anchors du_projected.
    double reference_sigma = 1.0;
};

struct RunConfig {
    std::string name = "default";
    comb::CombParams comb;
    SpopoConfig spopo;
    squeezing::DetectionChain chain;
    ExperimentConfig experiment;
    PhaseScanConfig phase_scan;
    SqueezeSpectrumConfig squeeze_spectrum;
    SqlConfig sql;
    std::string out_dir = "out";
    bool emit_csv = true;
    bool emit_svg = false;
    std::uint64_t seed = 1;

    [[nodiscard]] squeezing::SpopoParams spopo_params() const;
    [[nodiscard]] montecarlo::QuantumState state() const;
    [[nodiscard]] montecarlo::ExperimentScenario scenario() const;
    [[nodiscard]] squeezing::QuadraturePair phase_scan_pair() const;

    /// Checks every section against its module invariants; throws ConfigError.
    void validate() const;
};

/// Overlays a JSON(C) document onto `cfg`. Throws ConfigError.
void apply_config_text(RunConfig& cfg, std::string_view text);
void apply_config_file(RunConfig& cfg, const std::string& path);

[[nodiscard]] std::vector<std::string> preset_names();
/// Built-in preset text; throws ConfigError for unknown names. "paper" is an
/// alias of "paper-coherent".
[[nodiscard]] std::string_view preset_text(std::string_view name);
[[nodiscard]] RunConfig load_preset(std::string_view name);

/// "csv,svg" -> flags.
void apply_emit_list(RunConfig& cfg, std::string_view list);

}  // namespace qtt::cli
