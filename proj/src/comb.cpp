#include "qtt/comb.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qtt/constants.hpp"
#include "qtt/error.hpp"

namespace qtt::comb {

using detail::require;

void CombParams::validate() const {
    require(lambda0_m > 0.0, "comb: lambda0 must be > 0");
    require(dt_fwhm_s > 0.0, "comb: dt_fwhm must be > 0");
    require(rep_rate_hz > 0.0, "comb: rep_rate must be > 0");
    require(power_w >= 0.0, "comb: power must be >= 0");
}

DerivedSpectral derive_spectral(const CombParams& comb) {
    comb.validate();
    DerivedSpectral d;
    d.omega0 = 2.0 * constants::pi * constants::c / comb.lambda0_m;
    d.domega = 2.0 * std::sqrt(2.0 * std::numbers::ln2) / comb.dt_fwhm_s;
    d.alpha = d.omega0 / d.domega;
    d.u0 = 1.0 / std::hypot(d.omega0, d.domega);
    return d;
}

TimeGrid TimeGrid::centered(double half_span, std::size_t count) {
    require(half_span > 0.0, "grid: half span must be > 0");
    require(count >= 2, "grid: need at least two samples");
    return TimeGrid{-half_span, 2.0 * half_span / static_cast<double>(count - 1), count};
}

TimeGrid default_grid(const DerivedSpectral& spectral) {
    return TimeGrid::centered(17.0 / spectral.domega, 4096);
}

namespace {

// Orthonormal Hermite function ψ_k(y) = H_k(y) e^{-y²/2} / √(2^k k! √π),
// by the three-term recurrence; avoids overflow of H_k for large |y|.
double hermite_function(int k, double y) {
    const double g = std::exp(-0.5 * y * y) / std::sqrt(std::sqrt(constants::pi));
    if (k == 0) return g;
    double prev = g;
    double cur = std::sqrt(2.0) * y * g;
    for (int n = 2; n <= k; ++n) {
        const double next = std::sqrt(2.0 / n) * y * cur - std::sqrt((n - 1.0) / n) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

void check_grid(const TimeGrid& grid, const DerivedSpectral& d, Carrier carrier) {
    require(grid.count >= 2 && grid.step > 0.0, "grid: needs >= 2 samples and positive step");
    const double need = 6.0 / d.domega;
    const double slack = 1e-9 * need;
    if (grid.start > -need + slack || grid.stop() < need - slack) {
        throw InvalidParameter("grid: must span at least ±6/Δω around the pulse center");
    }
    if (carrier == Carrier::Sampled && grid.step * d.omega0 > constants::pi / 2.0) {
        throw ResolutionError("grid: step " + std::to_string(grid.step) +
                              " s too coarse to sample the carrier (need <= π/(2ω₀))");
    }
}

// Raw (unnormalized norm aside) samples of v_k(u − shift).
std::vector<cdouble> sample_mode(int k, const DerivedSpectral& d, const TimeGrid& grid,
                                 Carrier carrier, double shift) {
    std::vector<cdouble> out(grid.count);
    const double scale = d.domega / std::sqrt(2.0);
    // Carrier phase of the shifted pulse; tracked symbolically in envelope form.
    const cdouble shift_phase = std::polar(1.0, d.omega0 * shift);
    for (std::size_t i = 0; i < grid.count; ++i) {
        const double u = grid.at(i);
        const double env = hermite_function(k, (u - shift) * scale);
        if (carrier == Carrier::Sampled) {
            out[i] = env * std::polar(1.0, -d.omega0 * (u - shift));
        } else {
            out[i] = env * shift_phase;
        }
    }
    return out;
}

cdouble trapezoid(const std::vector<cdouble>& f, const std::vector<cdouble>& g, double step) {
    const std::size_t n = f.size();
    cdouble acc = 0.5 * (std::conj(f.front()) * g.front() + std::conj(f.back()) * g.back());
    for (std::size_t i = 1; i + 1 < n; ++i) acc += std::conj(f[i]) * g[i];
    return acc * step;
}

double sample_norm(const std::vector<cdouble>& f, double step) {
    return std::sqrt(trapezoid(f, f, step).real());
}

ModeFunction make_mode(int k, const DerivedSpectral& d, const TimeGrid& grid, Carrier carrier) {
    ModeFunction m;
    m.index = k;
    m.grid = grid;
    m.carrier = carrier;
    m.carrier_omega = d.omega0;
    m.samples = sample_mode(k, d, grid, carrier, 0.0);
    const double nrm = sample_norm(m.samples, grid.step);
    for (auto& s : m.samples) s /= nrm;
    return m;
}

}  // namespace

cdouble inner_product(const ModeFunction& f, const ModeFunction& g) {
    if (!(f.grid == g.grid) || f.carrier != g.carrier || f.carrier_omega != g.carrier_omega ||
        f.samples.size() != g.samples.size()) {
        throw GridMismatch("inner_product: mode functions are not on the same grid");
    }
    if (f.samples.empty()) return 0.0;
    return trapezoid(f.samples, g.samples, f.grid.step);
}

double norm(const ModeFunction& f) { return std::sqrt(inner_product(f, f).real()); }

ModeFunction supermode(int k, const CombParams& comb, const TimeGrid& grid, Carrier carrier) {
    require(k >= 0, "supermode: index must be >= 0");
    const DerivedSpectral d = derive_spectral(comb);
    check_grid(grid, d, carrier);
    return make_mode(k, d, grid, carrier);
}

ModeFunction timing_mode(const CombParams& comb, const TimeGrid& grid, Carrier carrier) {
    const DerivedSpectral d = derive_spectral(comb);
    check_grid(grid, d, carrier);
    const ModeFunction v0 = make_mode(0, d, grid, carrier);
    const ModeFunction v1 = make_mode(1, d, grid, carrier);

    ModeFunction w = v1;
    const double scale = 1.0 / std::sqrt(d.alpha * d.alpha + 1.0);
    const cdouble a0{0.0, d.alpha * scale};
    for (std::size_t i = 0; i < w.samples.size(); ++i) {
        w.samples[i] = a0 * v0.samples[i] + scale * v1.samples[i];
    }
    return w;
}

ShiftDecomposition shifted_pulse_decomposition(double delta_u, const CombParams& comb,
                                               const TimeGrid& grid) {
    const DerivedSpectral d = derive_spectral(comb);
    check_grid(grid, d, Carrier::Envelope);

    const ModeFunction v0 = make_mode(0, d, grid, Carrier::Envelope);
    const ModeFunction v1 = make_mode(1, d, grid, Carrier::Envelope);
    const ModeFunction w1 = timing_mode(comb, grid);

    // Same normalization as the unshifted v₀ so that Δu = 0 is an exact identity.
    const double nrm = sample_norm(sample_mode(0, d, grid, Carrier::Envelope, 0.0), grid.step);
    ModeFunction shifted = v0;
    shifted.samples = sample_mode(0, d, grid, Carrier::Envelope, delta_u);
    for (auto& s : shifted.samples) s /= nrm;

    ShiftDecomposition out;
    out.c0 = inner_product(v0, shifted);

    ModeFunction delta = shifted;
    for (std::size_t i = 0; i < delta.samples.size(); ++i) delta.samples[i] -= v0.samples[i];
    out.c_w = inner_product(w1, delta);

    // span{v₀, w₁} = span{v₀, v₁}; project on the orthonormal pair.
    const cdouble p0 = inner_product(v0, shifted);
    const cdouble p1 = inner_product(v1, shifted);
    ModeFunction rest = shifted;
    for (std::size_t i = 0; i < rest.samples.size(); ++i) {
        rest.samples[i] -= p0 * v0.samples[i] + p1 * v1.samples[i];
    }
    out.residual = norm(rest);
    out.first_order = std::abs(delta_u) / d.u0 < 0.1;
    return out;
}

}  // namespace qtt::comb
