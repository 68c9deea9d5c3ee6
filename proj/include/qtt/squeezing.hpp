#pragma once

// SPOPO quadrature-noise model.
//
// All variances are normalized to shot noise (vacuum = 1). "dB of squeezing"
// is reported positive and maps to a variance of 10^(-dB/10); variance_to_db
// itself is signed (0.5 -> -3.01 dB).

#include <cstddef>
#include <optional>
#include <vector>

namespace qtt::squeezing {

struct SpopoParams {
    double zeta = 0.814;       ///< escape efficiency
    double gamma_s = 9.8174770424681e6;  ///< signal decay rate (rad/s)
    double r = 0.0;            ///< normalized amplitude pump rate √(P/P_thr)
    /// Λ_k/Λ₀ per supermode. Placeholder spectrum, not derived from any
    /// crystal model; supply measured or computed values where available.
    std::vector<double> lambda_ratios{1.0, -0.7, 0.5, -0.35};

    /// `allow_threshold` admits r = 1, where the variance formula is still algebraically
    /// defined for Δ²P̂ but the OPO model is not.
    void validate(bool allow_threshold = false) const;
};

/// Cavity half-linewidth estimate π·FSR/F (rad/s).
[[nodiscard]] double cavity_decay_rate(double fsr_hz, double finesse);

struct DetectionChain {
    double rho = 0.93;  ///< photodiode quantum efficiency
    double eta = 0.98;  ///< propagation efficiency
    double xi = 0.89;   ///< interference visibility
    /// Direct η_tot, bypassing ρηξ² (for quoted totals that include
    /// unlisted losses).
    std::optional<double> eta_tot_override;

    [[nodiscard]] double eta_tot() const;
    [[nodiscard]] double eta_tot_product() const { return rho * eta * xi * xi; }
    void validate() const;
};

struct QuadraturePair {
    double var_p = 1.0;  ///< Δ²P̂_k, phase quadrature
    double var_q = 1.0;  ///< Δ²Q̂_k, amplitude quadrature
    double omega = 0.0;  ///< analysis frequency Ω (rad/s)
    std::size_t k = 0;
    /// Set when Λ_k/Λ₀ < 0: the squeezed quadrature is Q̂ instead of P̂ and
    /// var_p / var_q hold the swapped values.
    bool quadrature_swapped = false;
};

/// r = √(P/P_thr); throws AboveThreshold for P ≥ P_thr.
[[nodiscard]] double pump_rate(double power_w, double threshold_w);

[[nodiscard]] QuadraturePair quadrature_variances(std::size_t k, double omega,
                                                  const SpopoParams& spopo,
                                                  const DetectionChain& chain);

[[nodiscard]] double variance_to_db(double v);
[[nodiscard]] double db_to_variance(double db);

/// Positive "dB of squeezing" -> variance below shot noise.
[[nodiscard]] inline double squeezing_db_to_variance(double squeeze_db) {
    return db_to_variance(-squeeze_db);
}

/// Δ²X_θ = var_q cos²θ + var_p sin²θ.
[[nodiscard]] double rotated_variance(double theta, const QuadraturePair& pair);

}  // namespace qtt::squeezing
