#include "qtt/squeezing.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "qtt/constants.hpp"
#include "qtt/error.hpp"

namespace qtt::squeezing {

using detail::require;

namespace {
bool unit_interval(double x) { return x >= 0.0 && x <= 1.0; }
}  // namespace

void SpopoParams::validate(bool allow_threshold) const {
    require(unit_interval(zeta), "spopo: zeta must be in [0,1]");
    require(gamma_s > 0.0, "spopo: gamma_s must be > 0");
    if (allow_threshold) {
        require(r >= 0.0 && r <= 1.0, "spopo: pump rate r must be in [0,1]");
    } else {
        require(r >= 0.0 && r < 1.0, "spopo: pump rate r must be in [0,1) (below threshold)");
    }
    require(!lambda_ratios.empty() && lambda_ratios.front() == 1.0,
            "spopo: lambda_ratios[0] must be 1");
    for (double l : lambda_ratios) {
        require(std::abs(l) <= 1.0, "spopo: |lambda ratio| must be <= 1");
    }
}

double cavity_decay_rate(double fsr_hz, double finesse) {
    require(fsr_hz > 0.0 && finesse > 0.0, "cavity_decay_rate: FSR and finesse must be > 0");
    return constants::pi * fsr_hz / finesse;
}

double DetectionChain::eta_tot() const { return eta_tot_override.value_or(eta_tot_product()); }

void DetectionChain::validate() const {
    require(unit_interval(rho), "chain: rho must be in [0,1]");
    require(unit_interval(eta), "chain: eta must be in [0,1]");
    require(unit_interval(xi), "chain: xi must be in [0,1]");
    if (eta_tot_override) require(unit_interval(*eta_tot_override), "chain: eta_tot must be in [0,1]");
}

double pump_rate(double power_w, double threshold_w) {
    require(threshold_w > 0.0, "pump_rate: threshold must be > 0");
    require(power_w >= 0.0, "pump_rate: power must be >= 0");
    if (power_w >= threshold_w) {
        throw AboveThreshold("pump_rate: pump power at or above oscillation threshold");
    }
    return std::sqrt(power_w / threshold_w);
}

QuadraturePair quadrature_variances(std::size_t k, double omega, const SpopoParams& spopo,
                                    const DetectionChain& chain) {
    spopo.validate(/*allow_threshold=*/true);
    chain.validate();
    if (k >= spopo.lambda_ratios.size()) {
        throw InvalidParameter("quadrature_variances: supermode index " + std::to_string(k) +
                               " has no eigenvalue ratio");
    }
    require(omega >= 0.0, "quadrature_variances: omega must be >= 0");

    const double ratio = spopo.lambda_ratios[k];
    const double rk = spopo.r * std::abs(ratio);
    const double g2 = spopo.gamma_s * spopo.gamma_s;
    const double plus = g2 * (1.0 + rk) * (1.0 + rk);
    const double minus = g2 * (1.0 - rk) * (1.0 - rk);
    const double gain = spopo.zeta * chain.eta_tot() * (plus - minus);
    const double w2 = omega * omega;

    QuadraturePair out;
    out.k = k;
    out.omega = omega;
    out.var_p = 1.0 - gain / (plus + w2);
    const double q_den = minus + w2;
    out.var_q = q_den > 0.0 ? 1.0 + gain / q_den
                            : (gain > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
    if (ratio < 0.0) {
        std::swap(out.var_p, out.var_q);
        out.quadrature_swapped = true;
    }
    return out;
}

double variance_to_db(double v) {
    require(v > 0.0, "variance_to_db: variance must be > 0");
    return 10.0 * std::log10(v);
}

double db_to_variance(double db) { return std::pow(10.0, db / 10.0); }

double rotated_variance(double theta, const QuadraturePair& pair) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return pair.var_q * c * c + pair.var_p * s * s;
}

}  // namespace qtt::squeezing
