#pragma once

// Analytic timing sensitivities for shaped-LO homodyne detection.
//
// Photon numbers are "effective" (already multiplied by the total detection
// efficiency). With a detection time of 1 s they are photons per second and
// every delay below comes out in s/√Hz. Proportionality constants of the
// homodyne mean and standard deviation are both fixed to 1, so only their
// ratio is physical.

#include <optional>

#include "qtt/comb.hpp"

namespace qtt::metrology {

struct PhotonBudget {
    double n_eff = 0.0;
    double power_w = 0.0;
    double detection_time_s = 0.0;
    double eta_tot = 0.0;
};

struct HomodyneConfig {
    double n_signal = 0.0;
    double n_lo = 1.0;
    double theta_s = 0.0;
    double theta_lo = 0.0;
};

struct TimingResult {
    /// Minimum detectable delay (s/√Hz); empty when the tone is not resolved.
    std::optional<double> du_min;
    double sql_ref = 0.0;   ///< coherent-state SQL at the same photon budget
    double sigma = 0.0;     ///< amplitude SNR Σ at the modulation frequency
    double squeezing_db_used = 0.0;  ///< 10log₁₀ Δ²P̂₀ (negative when squeezed)
    double sa_improvement_db = 0.0;  ///< measured tone-bin excess over the floor
    double du_min_analytic = 0.0;    ///< closed-form prediction from min_detectable_du
    double sigma_analytic = 0.0;     ///< Σ predicted from du_min_analytic
};

/// 1/(2Δω√N)
[[nodiscard]] double sql_tof(double n, double domega);
/// 1/(2ω₀√N)
[[nodiscard]] double sql_ph(double n, double omega0);
/// 1/(2√N√(ω₀²+Δω²)); either frequency may be zero but not both.
[[nodiscard]] double sql_combined(double n, double omega0, double domega);

/// n_eff = η_tot·P·T/(ħω₀)
[[nodiscard]] PhotonBudget effective_photons(double power_w, double lambda0_m,
                                             double detection_time_s, double eta_tot);

/// 2√(N·N_LO)·[(Δu/u₀)cos(θs−θLO) + α/√(α²+1)·sin(θs−θLO)]
[[nodiscard]] double homodyne_mean(const HomodyneConfig& cfg, double delta_u,
                                   const comb::DerivedSpectral& spectral);

/// (α²Δ²P̂₀ + Δ²Q̂₁)/(1+α²): the noise of a w₁-shaped LO relative to shot noise.
[[nodiscard]] double noise_mixture(double alpha, double var_p0, double var_q1);

/// √(N_LO/(1+α²)·(α²Δ²P̂₀ + Δ²Q̂₁))
[[nodiscard]] double homodyne_std(double n_lo, double alpha, double var_p0, double var_q1);

/// Delay at unit SNR:
///   √(ω₀²Δ²P̂₀ + Δω²Δ²Q̂₁) / (2√N(ω₀²+Δω²))
[[nodiscard]] double min_detectable_du(double n, const comb::DerivedSpectral& spectral,
                                       double var_p0, double var_q1);

/// Rescales a coherent-state sensitivity to a squeezed state with the same
/// photon budget: du_coherent·√mixture.
[[nodiscard]] double scale_to_squeezing(double du_coherent, double alpha, double var_p0,
                                        double var_q1);

[[nodiscard]] double pzt_to_delay(double volts, double coeff_s_per_v);
/// Single-pass Δx/c.
[[nodiscard]] double length_to_delay(double dx_m);

/// Total power over floor when the tone has amplitude SNR Σ: 10log₁₀(1+Σ²).
[[nodiscard]] double snr_to_sa_improvement(double sigma);
[[nodiscard]] double sa_improvement_to_snr(double improvement_db);

/// applied_du/(Σ·√RBW)
[[nodiscard]] double du_min_from_experiment(double applied_du, double sigma, double rbw_hz);

}  // namespace qtt::metrology
