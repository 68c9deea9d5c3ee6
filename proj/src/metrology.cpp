#include "qtt/metrology.hpp"

#include <cmath>

#include "qtt/constants.hpp"
#include "qtt/error.hpp"

namespace qtt::metrology {

using detail::require;

double sql_tof(double n, double domega) {
    require(n > 0.0 && domega > 0.0, "sql_tof: N and Δω must be > 0");
    return 1.0 / (2.0 * domega * std::sqrt(n));
}

double sql_ph(double n, double omega0) {
    require(n > 0.0 && omega0 > 0.0, "sql_ph: N and ω₀ must be > 0");
    return 1.0 / (2.0 * omega0 * std::sqrt(n));
}

double sql_combined(double n, double omega0, double domega) {
    require(n > 0.0, "sql_combined: N must be > 0");
    require(omega0 >= 0.0 && domega >= 0.0 && omega0 + domega > 0.0,
            "sql_combined: frequencies must be >= 0 and not both zero");
    return 1.0 / (2.0 * std::sqrt(n) * std::hypot(omega0, domega));
}

PhotonBudget effective_photons(double power_w, double lambda0_m, double detection_time_s,
                               double eta_tot) {
    require(power_w >= 0.0, "effective_photons: power must be >= 0");
    require(lambda0_m > 0.0, "effective_photons: wavelength must be > 0");
    require(detection_time_s > 0.0, "effective_photons: detection time must be > 0");
    require(eta_tot >= 0.0 && eta_tot <= 1.0, "effective_photons: eta_tot must be in [0,1]");
    const double photon_energy = constants::hbar * 2.0 * constants::pi * constants::c / lambda0_m;
    return PhotonBudget{eta_tot * power_w * detection_time_s / photon_energy, power_w,
                        detection_time_s, eta_tot};
}

double homodyne_mean(const HomodyneConfig& cfg, double delta_u,
                     const comb::DerivedSpectral& spectral) {
    const double dphi = cfg.theta_s - cfg.theta_lo;
    const double a = spectral.alpha;
    return 2.0 * std::sqrt(cfg.n_signal * cfg.n_lo) *
           (delta_u / spectral.u0 * std::cos(dphi) + a / std::sqrt(a * a + 1.0) * std::sin(dphi));
}

double noise_mixture(double alpha, double var_p0, double var_q1) {
    require(var_p0 > 0.0 && var_q1 > 0.0, "noise_mixture: variances must be > 0");
    const double a2 = alpha * alpha;
    return (a2 * var_p0 + var_q1) / (a2 + 1.0);
}

double homodyne_std(double n_lo, double alpha, double var_p0, double var_q1) {
    require(n_lo > 0.0, "homodyne_std: N_LO must be > 0");
    return std::sqrt(n_lo * noise_mixture(alpha, var_p0, var_q1));
}

double min_detectable_du(double n, const comb::DerivedSpectral& spectral, double var_p0,
                         double var_q1) {
    require(n > 0.0, "min_detectable_du: N must be > 0");
    require(var_p0 > 0.0 && var_q1 > 0.0, "min_detectable_du: variances must be > 0");
    const double w2 = spectral.omega0 * spectral.omega0;
    const double d2 = spectral.domega * spectral.domega;
    return std::sqrt(w2 * var_p0 + d2 * var_q1) / (2.0 * std::sqrt(n) * (w2 + d2));
}

double scale_to_squeezing(double du_coherent, double alpha, double var_p0, double var_q1) {
    require(du_coherent > 0.0, "scale_to_squeezing: reference delay must be > 0");
    return du_coherent * std::sqrt(noise_mixture(alpha, var_p0, var_q1));
}

double pzt_to_delay(double volts, double coeff_s_per_v) {
    require(coeff_s_per_v > 0.0, "pzt_to_delay: calibration coefficient must be > 0");
    return volts * coeff_s_per_v;
}

double length_to_delay(double dx_m) { return dx_m / constants::c; }

double snr_to_sa_improvement(double sigma) {
    require(sigma >= 0.0, "snr_to_sa_improvement: sigma must be >= 0");
    return 10.0 * std::log10(1.0 + sigma * sigma);
}

double sa_improvement_to_snr(double improvement_db) {
    require(improvement_db >= 0.0, "sa_improvement_to_snr: improvement must be >= 0 dB");
    return std::sqrt(std::pow(10.0, improvement_db / 10.0) - 1.0);
}

double du_min_from_experiment(double applied_du, double sigma, double rbw_hz) {
    require(applied_du > 0.0 && sigma > 0.0 && rbw_hz > 0.0,
            "du_min_from_experiment: inputs must be > 0");
    return applied_du / (sigma * std::sqrt(rbw_hz));
}

}  // namespace qtt::metrology
