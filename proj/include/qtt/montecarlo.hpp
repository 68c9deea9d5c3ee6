#pragma once

// Monte-Carlo reproduction of the shaped-LO timing experiment.
//
// The balanced-homodyne difference current is synthesized in shot-noise
// units: d_i = A·sin(2π f_mod t_i) + σ·z_i with z_i standard normal and
// σ² the w₁-mode noise mixture. The tone amplitude A is fixed so that the
// periodogram SNR Σ equals the analytic homodyne SNR for one 1/RBW
// integration window, i.e. Σ = Δu/(du_min·√RBW).
//
// Noise draws depend only on the seed, so a coherent and a squeezed run with
// the same seed see the same z_i ("seed-paired").

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qtt/comb.hpp"
#include "qtt/metrology.hpp"
#include "qtt/squeezing.hpp"

namespace qtt::montecarlo {

struct QuantumState {
    enum class Kind { Coherent, Squeezed };
    Kind kind = Kind::Coherent;
    double var_p0 = 1.0;
    double var_q1 = 1.0;

    [[nodiscard]] static QuantumState coherent() { return {}; }
    [[nodiscard]] static QuantumState squeezed(double var_p0, double var_q1) {
        return {Kind::Squeezed, var_p0, var_q1};
    }
};

struct Modulation {
    double frequency_hz = 2e6;
    double applied_du_s = 0.0;
};

struct AnalyzerSettings {
    double rbw_hz = 100e3;
    std::size_t n_averages = 64;
};

struct ExperimentScenario {
    comb::CombParams comb;
    squeezing::DetectionChain chain;
    QuantumState state;
    Modulation modulation;
    AnalyzerSettings sa;
    double sample_rate_hz = 10e6;
    double duration_s = 0.1;
    std::uint64_t rng_seed = 1;

    /// Nyquist, bin alignment of the tone and enough data for n_averages.
    void validate() const;
    [[nodiscard]] std::size_t sample_count() const;
    [[nodiscard]] std::size_t segment_length() const;
};

struct SpectrumTrace {
    std::vector<double> frequencies;  ///< Hz
    std::vector<double> power;        ///< shot-noise units per RBW
    double rbw = 0.0;
    std::size_t segments = 0;
};

struct ToneEstimate {
    double tone_power = 0.0;
    double floor = 0.0;
    double sigma = 0.0;       ///< √max(0, tone/floor − 1)
    double excess_db = 0.0;   ///< 10log₁₀(tone/floor)
    bool resolved = false;    ///< excess > 5 standard errors of the bin average
};

/// Noise variance per sample (the w₁-mode mixture) for a state.
[[nodiscard]] double noise_variance(const ExperimentScenario& scenario);
/// Tone amplitude A in shot-noise units.
[[nodiscard]] double tone_amplitude(const ExperimentScenario& scenario);

[[nodiscard]] std::vector<double> synthesize_trace(const ExperimentScenario& scenario);

/// Averaged rectangular-window periodogram over `n_averages` consecutive
/// segments of sample_rate/rbw samples. Bin k (0..L/2) holds |X_k|²/L
/// averaged, so white noise of variance σ² gives a floor of σ².
[[nodiscard]] SpectrumTrace spectrum(std::span<const double> trace, double sample_rate_hz,
                                     double rbw_hz, std::size_t n_averages);

[[nodiscard]] ToneEstimate measure_tone(const SpectrumTrace& spec, double f_mod_hz);
[[nodiscard]] double estimate_sigma(const SpectrumTrace& spec, double f_mod_hz);

[[nodiscard]] metrology::TimingResult run_timing_experiment(const ExperimentScenario& scenario);

struct TimingRun {
    metrology::TimingResult result;
    SpectrumTrace spectrum;
};

/// Same pipeline, keeping the analyzer trace.
[[nodiscard]] TimingRun run_timing_detailed(const ExperimentScenario& scenario);

/// One run per seed, evaluated on up to `threads` workers. Result i always
/// belongs to seeds[i] regardless of scheduling.
[[nodiscard]] std::vector<metrology::TimingResult> run_timing_batch(
    const ExperimentScenario& scenario, std::span<const std::uint64_t> seeds,
    unsigned threads = 0);

/// Sawtooth scan of the LO phase.
struct PhaseScanSpec {
    std::size_t periods = 2;
    std::size_t points_per_period = 128;
    std::size_t draws_per_point = 100000;
    double period_s = 0.1;
    double theta_start = 0.0;
    double theta_span = 2.0 * 3.14159265358979323846;
};

struct PhaseScanTrace {
    std::vector<double> time;      ///< s
    std::vector<double> theta;     ///< rad
    std::vector<double> variance;  ///< shot-noise units
};

[[nodiscard]] PhaseScanTrace phase_scan(const squeezing::QuadraturePair& pair,
                                        const PhaseScanSpec& scan, std::uint64_t seed);

}  // namespace qtt::montecarlo
