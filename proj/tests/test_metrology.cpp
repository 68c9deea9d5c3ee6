#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qtt/comb.hpp"
#include "qtt/error.hpp"
#include "qtt/metrology.hpp"
#include "qtt/squeezing.hpp"

using namespace qtt::metrology;
using qtt::comb::DerivedSpectral;

namespace {

const DerivedSpectral kSpectral = qtt::comb::derive_spectral({});

// 2 µW at 815 nm, η_tot = 0.68, T = 1 s.
constexpr double kN = 5579814806883.2;
constexpr double kSqlTof = 1.1685458035267639e-20;
constexpr double kSqlPh = 9.158348156119571e-23;
constexpr double kSqlCombined = 9.158066894828987e-23;

// Δu such that the homodyne mean equals one standard deviation, found from
// the two signal-level primitives rather than the closed form.
double delay_at_unit_snr(double n, const DerivedSpectral& s, double var_p0, double var_q1) {
    const HomodyneConfig cfg{n, 1.0, 0.0, 0.0};
    const double slope = homodyne_mean(cfg, 1e-20, s) / 1e-20;
    return homodyne_std(1.0, s.alpha, var_p0, var_q1) / slope;
}

}  // namespace

TEST_CASE("photon budget") {
    const auto b = effective_photons(2e-6, 815e-9, 1.0, 0.68);
    CHECK(b.n_eff == doctest::Approx(kN).epsilon(1e-12));
    CHECK(b.power_w == 2e-6);
    CHECK(b.eta_tot == 0.68);
    // Photon energy ħω₀.
    CHECK(2e-6 * 0.68 / b.n_eff == doctest::Approx(2.43735687844392e-19).epsilon(1e-12));
    CHECK(effective_photons(2e-6, 815e-9, 1.0, 0.0).n_eff == 0.0);
    CHECK(effective_photons(2e-6, 815e-9, 4.0, 0.68).n_eff == doctest::Approx(4 * kN));

    CHECK_THROWS_AS((void)effective_photons(-1.0, 815e-9, 1.0, 0.5), qtt::InvalidParameter);
    CHECK_THROWS_AS((void)effective_photons(1.0, 0.0, 1.0, 0.5), qtt::InvalidParameter);
    CHECK_THROWS_AS((void)effective_photons(1.0, 815e-9, 0.0, 0.5), qtt::InvalidParameter);
    CHECK_THROWS_AS((void)effective_photons(1.0, 815e-9, 1.0, 1.5), qtt::InvalidParameter);
}

TEST_CASE("standard quantum limits at the reference operating point") {
    CHECK(sql_tof(kN, kSpectral.domega) == doctest::Approx(kSqlTof).epsilon(1e-10));
    CHECK(sql_ph(kN, kSpectral.omega0) == doctest::Approx(kSqlPh).epsilon(1e-10));
    CHECK(sql_combined(kN, kSpectral.omega0, kSpectral.domega) == doctest::Approx(kSqlCombined).epsilon(1e-10));
    CHECK(sql_combined(kN, kSpectral.omega0, kSpectral.domega) == doctest::Approx(9.15e-23).epsilon(0.01));
}

TEST_CASE("SQL hierarchy and reductions") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> logu(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double n = std::pow(10.0, 6.0 + 10.0 * logu(gen));
        const double w0 = std::pow(10.0, 12.0 + 4.0 * logu(gen));
        const double dw = std::pow(10.0, 12.0 + 4.0 * logu(gen));
        const double c = sql_combined(n, w0, dw);
        CHECK(c <= sql_tof(n, dw));
        CHECK(c <= sql_ph(n, w0));
        // 1/c² = 1/ph² + 1/tof²
        const double lhs = 1.0 / (c * c);
        const double rhs = 1.0 / std::pow(sql_ph(n, w0), 2) + 1.0 / std::pow(sql_tof(n, dw), 2);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        // N^-1/2 scaling
        CHECK(sql_combined(4.0 * n, w0, dw) == doctest::Approx(c / 2.0).epsilon(1e-14));
    }
    CHECK(sql_combined(kN, kSpectral.omega0, 0.0) == doctest::Approx(sql_ph(kN, kSpectral.omega0)));
    CHECK(sql_combined(kN, 0.0, kSpectral.domega) == doctest::Approx(sql_tof(kN, kSpectral.domega)));

    CHECK_THROWS_AS((void)sql_combined(0.0, 1.0, 1.0), qtt::InvalidParameter);
    CHECK_THROWS_AS((void)sql_combined(kN, 0.0, 0.0), qtt::InvalidParameter);
    CHECK_THROWS_AS((void)sql_tof(kN, 0.0), qtt::InvalidParameter);
    CHECK_THROWS_AS((void)sql_ph(-1.0, 1.0), qtt::InvalidParameter);
}

TEST_CASE("homodyne mean") {
    const HomodyneConfig in_phase{kN, 1.0, 0.3, 0.3};
    CHECK(homodyne_mean(in_phase, 0.0, kSpectral) == 0.0);
    const double du = 1e-3 * kSpectral.u0;
    CHECK(homodyne_mean(in_phase, du, kSpectral) == doctest::Approx(2.0 * std::sqrt(kN) * 1e-3).epsilon(1e-12));
    // Quadrature-phase LO: only the phase term survives.
    const HomodyneConfig quarter{kN, 1.0, std::numbers::pi / 2, 0.0};
    const double a = kSpectral.alpha;
    CHECK(homodyne_mean(quarter, du, kSpectral) ==
          doctest::Approx(2.0 * std::sqrt(kN) * a / std::sqrt(a * a + 1.0)).epsilon(1e-10));
    // Linear in Δu and in √N_LO.
    const HomodyneConfig big_lo{kN, 9.0, 0.0, 0.0};
    CHECK(homodyne_mean(big_lo, du, kSpectral) == doctest::Approx(3.0 * homodyne_mean(in_phase, du, kSpectral)));
}

TEST_CASE("noise mixture and homodyne std") {
    CHECK(noise_mixture(kSpectral.alpha, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(noise_mixture(0.0, 0.2, 3.0) == doctest::Approx(3.0));
    const double p = std::pow(10.0, -0.15);
    CHECK(noise_mixture(kSpectral.alpha, p, 1.0) == doctest::Approx(0.7079637226155422).epsilon(1e-12));
    CHECK(noise_mixture(kSpectral.alpha, 0.708, 1.0) == doctest::Approx(0.7080179349014325).epsilon(1e-12));
    CHECK(homodyne_std(4.0, kSpectral.alpha, 1.0, 1.0) == doctest::Approx(2.0));
    CHECK_THROWS_AS((void)noise_mixture(1.0, 0.0, 1.0), qtt::InvalidParameter);
    CHECK_THROWS_AS((void)homodyne_std(0.0, 1.0, 1.0, 1.0), qtt::InvalidParameter);
}

TEST_CASE("minimum detectable delay") {
    SUBCASE("reduces to the combined SQL for coherent light") {
        CHECK(min_detectable_du(kN, kSpectral, 1.0, 1.0) ==
              doctest::Approx(sql_combined(kN, kSpectral.omega0, kSpectral.domega)).epsilon(1e-12));
    }

    SUBCASE("equals the unit-SNR delay of the homodyne signal") {
        std::mt19937_64 gen(5);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 100; ++i) {
            const qtt::comb::CombParams comb{600e-9 + 1000e-9 * u(gen), 20e-15 + 500e-15 * u(gen), 75e6,
                                             1e-6};
            const auto s = qtt::comb::derive_spectral(comb);
            const double n = std::pow(10.0, 8.0 + 8.0 * u(gen));
            const double vp = std::pow(10.0, -1.0 + 1.5 * u(gen));
            const double vq = std::pow(10.0, -1.0 + 1.5 * u(gen));
            CHECK(delay_at_unit_snr(n, s, vp, vq) == doctest::Approx(min_detectable_du(n, s, vp, vq)).epsilon(1e-10));
            // Rescaling the coherent value by the mixture gives the same result.
            CHECK(scale_to_squeezing(min_detectable_du(n, s, 1.0, 1.0), s.alpha, vp, vq) ==
                  doctest::Approx(min_detectable_du(n, s, vp, vq)).epsilon(1e-12));
        }
    }

    SUBCASE("phase squeezing lowers the limit monotonically") {
        double prev = min_detectable_du(kN, kSpectral, 1.0, 1.0);
        for (double db = 0.5; db <= 15.0; db += 0.5) {
            const double du = min_detectable_du(kN, kSpectral, qtt::squeezing::squeezing_db_to_variance(db), 1.0);
            CHECK(du < prev);
            prev = du;
        }
    }

    SUBCASE("closed-form projection at 10 dB") {
        CHECK(min_detectable_du(kN, kSpectral, 0.1, 1.0) == doctest::Approx(2.8968353713870265e-23).epsilon(1e-10));
    }

    SUBCASE("ratio at 1.5 dB") {
        const double ratio = min_detectable_du(kN, kSpectral, std::pow(10.0, -0.15), 1.0) /
                             min_detectable_du(kN, kSpectral, 1.0, 1.0);
        CHECK(ratio == doctest::Approx(0.8414058013916603).epsilon(1e-12));
    }

    CHECK_THROWS_AS((void)min_detectable_du(0.0, kSpectral, 1.0, 1.0), qtt::InvalidParameter);
    CHECK_THROWS_AS((void)min_detectable_du(kN, kSpectral, 0.0, 1.0), qtt::InvalidParameter);
    CHECK_THROWS_AS((void)scale_to_squeezing(0.0, 1.0, 1.0, 1.0), qtt::InvalidParameter);
}

TEST_CASE("delay conversions") {
    CHECK(pzt_to_delay(1.7, 1.65e-20) == doctest::Approx(2.805e-20).epsilon(1e-14));
    CHECK(pzt_to_delay(0.0, 1.65e-20) == 0.0);
    CHECK(pzt_to_delay(-1.0, 1.65e-20) == -1.65e-20);
    CHECK_THROWS_AS((void)pzt_to_delay(1.0, 0.0), qtt::InvalidParameter);
    CHECK(length_to_delay(299792458.0) == 1.0);
    CHECK(length_to_delay(1e-9) == doctest::Approx(3.3356409519815204e-18));
}

TEST_CASE("spectrum-analyzer improvement and amplitude SNR") {
    CHECK(snr_to_sa_improvement(1.0) == doctest::Approx(3.0103).epsilon(1e-4));
    CHECK(snr_to_sa_improvement(1.183) == doctest::Approx(3.8012).epsilon(1e-4));
    CHECK(snr_to_sa_improvement(0.0) == 0.0);
    for (double s : {0.01, 0.5, 1.0, 2.0, 30.0}) {
        CHECK(sa_improvement_to_snr(snr_to_sa_improvement(s)) == doctest::Approx(s).epsilon(1e-10));
    }
    CHECK(sa_improvement_to_snr(0.0) == 0.0);
    CHECK_THROWS_AS((void)sa_improvement_to_snr(-0.1), qtt::InvalidParameter);
    CHECK_THROWS_AS((void)snr_to_sa_improvement(-1.0), qtt::InvalidParameter);
}

TEST_CASE("minimum detectable delay from an analyzer measurement") {
    CHECK(du_min_from_experiment(2.805e-20, 1.0, 1e5) == doctest::Approx(8.870188837e-23).epsilon(1e-9));
    CHECK(du_min_from_experiment(2.805e-20, 2.0, 1e5) == doctest::Approx(8.870188837e-23 / 2).epsilon(1e-9));
    CHECK_THROWS_AS((void)du_min_from_experiment(0.0, 1.0, 1e5), qtt::InvalidParameter);
    CHECK_THROWS_AS((void)du_min_from_experiment(1e-20, 0.0, 1e5), qtt::InvalidParameter);
    CHECK_THROWS_AS((void)du_min_from_experiment(1e-20, 1.0, 0.0), qtt::InvalidParameter);
}
