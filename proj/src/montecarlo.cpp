#include "qtt/montecarlo.hpp"

#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <mutex>
#include <thread>

#include "qtt/constants.hpp"
#include "qtt/error.hpp"
#include "qtt/random.hpp"

namespace qtt::montecarlo {

using detail::require;

namespace {

constexpr double kDetectionTime = 1.0;  // s; photon numbers per second -> per √Hz
constexpr double kResolvedStdErrors = 5.0;

// FFTW's planner is not re-entrant; execution on distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// Real-to-complex transform of a fixed length. FFTW_ESTIMATE keeps the chosen
// algorithm, and therefore the rounding, identical from run to run.
class RealFft {
public:
    explicit RealFft(std::size_t n)
        : n_(n),
          in_(fftw_alloc_real(n)),
          out_(fftw_alloc_complex(n / 2 + 1)) {
        if (!in_ || !out_) throw Error("fft: allocation failed");
        std::lock_guard lock(planner_mutex());
        plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_, out_, FFTW_ESTIMATE);
        if (!plan_) throw Error("fft: planning failed");
    }
    ~RealFft() {
        {
            std::lock_guard lock(planner_mutex());
            if (plan_) fftw_destroy_plan(plan_);
        }
        fftw_free(in_);
        fftw_free(out_);
    }
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    /// Accumulates |X_k|² of `segment` into `acc` (size n/2+1).
    void accumulate_power(std::span<const double> segment, std::vector<double>& acc) {
        std::copy(segment.begin(), segment.end(), in_);
        fftw_execute(plan_);
        for (std::size_t k = 0; k < acc.size(); ++k) {
            acc[k] += out_[k][0] * out_[k][0] + out_[k][1] * out_[k][1];
        }
    }

    [[nodiscard]] std::size_t size() const { return n_; }

private:
    std::size_t n_;
    double* in_;
    fftw_complex* out_;
    fftw_plan plan_ = nullptr;
};

std::size_t checked_segment_length(double sample_rate_hz, double rbw_hz) {
    require(sample_rate_hz > 0.0 && rbw_hz > 0.0, "spectrum: sample rate and RBW must be > 0");
    const double exact = sample_rate_hz / rbw_hz;
    const double rounded = std::round(exact);
    require(rounded >= 2.0, "spectrum: RBW too wide for the sample rate");
    require(std::abs(exact - rounded) <= 1e-9 * exact,
            "spectrum: sample_rate/rbw must be an integer segment length");
    return static_cast<std::size_t>(rounded);
}

double photons_per_second(const ExperimentScenario& s) {
    return metrology::effective_photons(s.comb.power_w, s.comb.lambda0_m, kDetectionTime,
                                        s.chain.eta_tot())
        .n_eff;
}

}  // namespace

void ExperimentScenario::validate() const {
    comb.validate();
    chain.validate();
    require(comb.power_w > 0.0, "scenario: signal power must be > 0");
    require(chain.eta_tot() > 0.0, "scenario: total detection efficiency must be > 0");
    require(state.var_p0 > 0.0 && state.var_q1 > 0.0, "scenario: state variances must be > 0");
    require(modulation.frequency_hz > 0.0, "scenario: modulation frequency must be > 0");
    require(modulation.applied_du_s >= 0.0, "scenario: applied delay must be >= 0");
    require(duration_s > 0.0, "scenario: duration must be > 0");
    require(sa.n_averages >= 1, "scenario: n_averages must be >= 1");
    if (!(sample_rate_hz > 2.0 * modulation.frequency_hz)) {
        throw InvalidParameter("scenario: sample rate must exceed twice the modulation frequency");
    }
    const std::size_t seg = checked_segment_length(sample_rate_hz, sa.rbw_hz);
    const double bin = modulation.frequency_hz / sa.rbw_hz;
    require(std::abs(bin - std::round(bin)) <= 1e-9 * std::max(1.0, bin),
            "scenario: modulation frequency must be a multiple of the RBW");
    require(duration_s * sa.rbw_hz >= static_cast<double>(sa.n_averages) * (1.0 - 1e-12),
            "scenario: duration*rbw must be >= n_averages");
    require(sample_count() >= seg * sa.n_averages, "scenario: not enough samples for averaging");
}

std::size_t ExperimentScenario::sample_count() const {
    return static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
}

std::size_t ExperimentScenario::segment_length() const {
    return checked_segment_length(sample_rate_hz, sa.rbw_hz);
}

double noise_variance(const ExperimentScenario& scenario) {
    const auto spectral = comb::derive_spectral(scenario.comb);
    return metrology::noise_mixture(spectral.alpha, scenario.state.var_p0, scenario.state.var_q1);
}

double tone_amplitude(const ExperimentScenario& scenario) {
    const auto spectral = comb::derive_spectral(scenario.comb);
    // Per-sample photon numbers; N_LO cancels against the shot-noise unit.
    metrology::HomodyneConfig cfg;
    cfg.n_signal = photons_per_second(scenario) / scenario.sample_rate_hz;
    cfg.n_lo = 1.0;
    const double mean = metrology::homodyne_mean(cfg, scenario.modulation.applied_du_s, spectral);
    const double shot = metrology::homodyne_std(cfg.n_lo, spectral.alpha, 1.0, 1.0);
    // One-sided periodogram of a sinusoid: factor 2 maps the per-sample SNR
    // onto the homodyne SNR of a single 1/RBW window.
    return 2.0 * mean / shot;
}

std::vector<double> synthesize_trace(const ExperimentScenario& scenario) {
    scenario.validate();
    const std::size_t n = scenario.sample_count();
    const double amp = tone_amplitude(scenario);
    const double sigma = std::sqrt(noise_variance(scenario));
    const double cycles_per_sample = scenario.modulation.frequency_hz / scenario.sample_rate_hz;

    random::Rng rng(scenario.rng_seed);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double frac = std::fmod(cycles_per_sample * static_cast<double>(i), 1.0);
        out[i] = amp * std::sin(2.0 * constants::pi * frac) + sigma * rng.normal();
    }
    return out;
}

SpectrumTrace spectrum(std::span<const double> trace, double sample_rate_hz, double rbw_hz,
                       std::size_t n_averages) {
    const std::size_t len = checked_segment_length(sample_rate_hz, rbw_hz);
    require(n_averages >= 1, "spectrum: n_averages must be >= 1");
    if (trace.size() < len * n_averages) {
        throw InsufficientData("spectrum: trace has " + std::to_string(trace.size()) +
                               " samples, need " + std::to_string(len * n_averages));
    }
    const std::size_t bins = len / 2 + 1;
    std::vector<double> acc(bins, 0.0);
    RealFft fft(len);
    for (std::size_t s = 0; s < n_averages; ++s) {
        fft.accumulate_power(trace.subspan(s * len, len), acc);
    }

    SpectrumTrace out;
    out.rbw = rbw_hz;
    out.segments = n_averages;
    out.frequencies.resize(bins);
    out.power.resize(bins);
    const double norm = 1.0 / (static_cast<double>(len) * static_cast<double>(n_averages));
    for (std::size_t k = 0; k < bins; ++k) {
        out.frequencies[k] = static_cast<double>(k) * rbw_hz;
        out.power[k] = acc[k] * norm;
    }
    return out;
}

ToneEstimate measure_tone(const SpectrumTrace& spec, double f_mod_hz) {
    require(spec.rbw > 0.0 && spec.power.size() >= 3, "measure_tone: empty spectrum");
    require(f_mod_hz > 0.0 && f_mod_hz <= spec.frequencies.back(),
            "measure_tone: modulation frequency outside the spectrum");
    const auto nbins = static_cast<long>(spec.power.size());
    const long k = std::lround(f_mod_hz / spec.rbw);

    // Floor from neighbours two to eleven bins away, skipping DC and Nyquist.
    double sum = 0.0;
    int used = 0;
    for (long off = 2; off <= 11; ++off) {
        for (long j : {k - off, k + off}) {
            if (j >= 1 && j < nbins - 1) {
                sum += spec.power[static_cast<std::size_t>(j)];
                ++used;
            }
        }
    }
    ToneEstimate est;
    est.tone_power = spec.power[static_cast<std::size_t>(k)];
    est.floor = used > 0 ? sum / used : 0.0;
    if (est.floor <= 0.0) return est;

    const double ratio = est.tone_power / est.floor;
    est.sigma = ratio > 1.0 ? std::sqrt(ratio - 1.0) : 0.0;
    est.excess_db = ratio > 0.0 ? 10.0 * std::log10(ratio) : 0.0;
    const double stderr_bin = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(spec.segments, 1)));
    est.resolved = ratio - 1.0 > kResolvedStdErrors * stderr_bin;
    return est;
}

double estimate_sigma(const SpectrumTrace& spec, double f_mod_hz) {
    return measure_tone(spec, f_mod_hz).sigma;
}

metrology::TimingResult run_timing_experiment(const ExperimentScenario& scenario) {
    return run_timing_detailed(scenario).result;
}

TimingRun run_timing_detailed(const ExperimentScenario& scenario) {
    TimingRun run;
    {
        const auto trace = synthesize_trace(scenario);
        run.spectrum = spectrum(trace, scenario.sample_rate_hz, scenario.sa.rbw_hz,
                                scenario.sa.n_averages);
    }
    const ToneEstimate tone = measure_tone(run.spectrum, scenario.modulation.frequency_hz);

    const auto spectral = comb::derive_spectral(scenario.comb);
    const double n = photons_per_second(scenario);
    const double applied = scenario.modulation.applied_du_s;

    metrology::TimingResult& r = run.result;
    r.sql_ref = metrology::sql_combined(n, spectral.omega0, spectral.domega);
    r.du_min_analytic =
        metrology::min_detectable_du(n, spectral, scenario.state.var_p0, scenario.state.var_q1);
    r.sigma_analytic = applied / (r.du_min_analytic * std::sqrt(scenario.sa.rbw_hz));
    r.sigma = tone.sigma;
    r.sa_improvement_db = tone.excess_db;
    r.squeezing_db_used = squeezing::variance_to_db(scenario.state.var_p0);
    if (applied > 0.0 && tone.resolved) {
        r.du_min = metrology::du_min_from_experiment(applied, tone.sigma, scenario.sa.rbw_hz);
    }
    return run;
}

std::vector<metrology::TimingResult> run_timing_batch(const ExperimentScenario& scenario,
                                                      std::span<const std::uint64_t> seeds,
                                                      unsigned threads) {
    scenario.validate();
    std::vector<metrology::TimingResult> results(seeds.size());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(seeds.size(), 1)));

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < seeds.size(); i = next++) {
            ExperimentScenario s = scenario;
            s.rng_seed = seeds[i];
            results[i] = run_timing_experiment(s);
        }
    };
    if (threads <= 1) {
        worker();
        return results;
    }
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    pool.clear();
    return results;
}

PhaseScanTrace phase_scan(const squeezing::QuadraturePair& pair, const PhaseScanSpec& scan,
                          std::uint64_t seed) {
    require(pair.var_p > 0.0 && pair.var_q > 0.0, "phase_scan: variances must be > 0");
    require(scan.periods >= 1 && scan.points_per_period >= 1, "phase_scan: empty scan");
    require(scan.draws_per_point >= 2, "phase_scan: need at least two draws per point");
    require(scan.period_s > 0.0, "phase_scan: period must be > 0");

    const std::size_t points = scan.periods * scan.points_per_period;
    const double dt = scan.period_s / static_cast<double>(scan.points_per_period);
    random::Rng rng(seed);

    PhaseScanTrace out;
    out.time.reserve(points);
    out.theta.reserve(points);
    out.variance.reserve(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double ramp = static_cast<double>(i % scan.points_per_period) /
                            static_cast<double>(scan.points_per_period);
        const double theta = scan.theta_start + scan.theta_span * ramp;
        const double sd = std::sqrt(squeezing::rotated_variance(theta, pair));
        // Zero-mean quadrature: the second moment is the variance estimator.
        double sum2 = 0.0;
        for (std::size_t j = 0; j < scan.draws_per_point; ++j) {
            const double x = sd * rng.normal();
            sum2 += x * x;
        }
        out.time.push_back(dt * static_cast<double>(i));
        out.theta.push_back(theta);
        out.variance.push_back(sum2 / static_cast<double>(scan.draws_per_point));
    }
    return out;
}

}  // namespace qtt::montecarlo
