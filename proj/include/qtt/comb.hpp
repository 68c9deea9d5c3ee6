#pragma once

// Frequency-comb pulse model.
//
// Pulses are expanded on Hermite-Gauss supermodes
//
//     v_k(u) ∝ H_k(uΔω/√2) · exp(-(uΔω)²/4) · exp(-iω₀u)
//
// sampled on a uniform time grid and renormalized numerically. The carrier
// exp(-iω₀u) is by default kept symbolic (Carrier::Envelope): samples hold the
// complex envelope only and every mode on the grid shares the same implicit
// carrier, so inner products are unaffected. Carrier::Sampled materializes it,
// which requires a grid fine enough to resolve ω₀.
//
// With the exp(-iω₀u) sign, a delayed pulse expands as
// v₀(u−Δu) ≈ v₀(u) + (Δu/u₀)·w₁(u) with w₁ = (iα v₀ + v₁)/√(α²+1).

#include <complex>
#include <cstddef>
#include <vector>

namespace qtt::comb {

using cdouble = std::complex<double>;

struct CombParams {
    double lambda0_m = 815e-9;      ///< center wavelength
    double dt_fwhm_s = 130e-15;     ///< intensity FWHM pulse duration
    double rep_rate_hz = 75e6;
    double power_w = 2e-6;          ///< mean optical power

    /// Throws InvalidParameter on non-positive inputs.
    void validate() const;
};

struct DerivedSpectral {
    double omega0 = 0.0;  ///< angular center frequency (rad/s)
    double domega = 0.0;  ///< angular spectral width Δω (rad/s)
    double alpha = 0.0;   ///< ω₀/Δω
    double u0 = 0.0;      ///< 1/√(ω₀²+Δω²) (s)

    /// ω₀ > Δω. Outside this regime the model still evaluates but the
    /// narrow-band assumptions behind the defaults no longer hold.
    [[nodiscard]] bool narrowband() const { return omega0 > domega; }
};

/// ω₀ = 2πc/λ₀, Δω = 2√(2 ln 2)/dt_fwhm.
[[nodiscard]] DerivedSpectral derive_spectral(const CombParams& comb);

struct TimeGrid {
    double start = 0.0;
    double step = 0.0;
    std::size_t count = 0;

    [[nodiscard]] double at(std::size_t i) const { return start + step * static_cast<double>(i); }
    [[nodiscard]] double stop() const { return at(count == 0 ? 0 : count - 1); }

    /// Symmetric grid [-half_span, +half_span] with `count` samples.
    [[nodiscard]] static TimeGrid centered(double half_span, std::size_t count);

    bool operator==(const TimeGrid&) const = default;
};

/// Default grid: ±17/Δω, 4096 samples.
[[nodiscard]] TimeGrid default_grid(const DerivedSpectral& spectral);

enum class Carrier { Envelope, Sampled };

struct ModeFunction {
    int index = 0;
    TimeGrid grid;
    Carrier carrier = Carrier::Envelope;
    double carrier_omega = 0.0;
    std::vector<cdouble> samples;
};

/// Trapezoidal ⟨f|g⟩ = ∫ conj(f)·g du. Throws GridMismatch unless both
/// functions share grid, carrier representation and carrier frequency.
[[nodiscard]] cdouble inner_product(const ModeFunction& f, const ModeFunction& g);

[[nodiscard]] double norm(const ModeFunction& f);

/// Supermode v_k on `grid`, unit-normalized by quadrature.
///
/// Throws InvalidParameter if k < 0 or the grid does not cover ±6/Δω, and
/// ResolutionError if Carrier::Sampled is requested on a grid with fewer than
/// four samples per carrier period.
[[nodiscard]] ModeFunction supermode(int k, const CombParams& comb, const TimeGrid& grid,
                                     Carrier carrier = Carrier::Envelope);

/// Timing mode w₁ = (iα v₀ + v₁)/√(α²+1).
[[nodiscard]] ModeFunction timing_mode(const CombParams& comb, const TimeGrid& grid,
                                       Carrier carrier = Carrier::Envelope);

struct ShiftDecomposition {
    cdouble c0;           ///< ⟨v₀ | v₀(u−Δu)⟩
    cdouble c_w;          ///< ⟨w₁ | v₀(u−Δu) − v₀(u)⟩, → Δu/u₀ for small Δu
    double residual = 0;  ///< distance from v₀(u−Δu) to span{v₀, w₁}
    bool first_order = true;  ///< |Δu|/u₀ < 0.1
};

/// Projects the time-shifted fundamental pulse onto {v₀, w₁}. The shift is
/// evaluated analytically, including the carrier phase exp(+iω₀Δu) that
/// exp(-iω₀u) picks up under u → u − Δu.
[[nodiscard]] ShiftDecomposition shifted_pulse_decomposition(double delta_u, const CombParams& comb,
                                                             const TimeGrid& grid);

}  // namespace qtt::comb
