#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "speclab/spectral.hpp"
#include "speclab/zeta_det.hpp"

using namespace speclab;

namespace {

// Golden number for the exact football log det', frozen from the series
// oracle (see football_logdet_oracle); kept here so regressions are loud.
constexpr double kFootballLogDet = 1.4463668174942330;

EvList round_sphere_spectrum(int lmax) {
    EvList ev;
    for (int l = 0; l <= lmax; ++l) ev.push(double(l) * (l + 1), 2.0 * l + 1.0);
    return ev;
}

} // namespace

TEST_CASE("football_spectrum: structure and counts") {
    const EvList ev = football_spectrum(1.0);
    REQUIRE(ev.lam.size() == 3);
    CHECK(ev.lam[0] == 0.0);
    CHECK(ev.mult[0] == 1.0);
    CHECK(ev.lam[1] == doctest::Approx(0.75));
    CHECK(ev.mult[1] == 2.0);
    CHECK(ev.lam[2] == doctest::Approx(2.0));
    CHECK(ev.mult[2] == 3.0);

    // multiplicity of lambda = 6 (nu = 2) is 5
    const EvList e2 = football_spectrum(2.0);
    CHECK(e2.mult[4] == 5.0);
    // total count up to integer nu is (2nu+1)(nu+1)
    double total = 0.0;
    for (double m : e2.mult) total += m;
    CHECK(total == doctest::Approx((2 * 2 + 1) * (2 + 1)));
}

TEST_CASE("heat_trace: trivial cases and zero-mode flag") {
    EvList just_zero;
    just_zero.push(0.0);
    WeylTail none;
    CHECK(heat_trace(just_zero, none, 1.0) == doctest::Approx(1.0));

    const EvList ev = football_spectrum(30.0);
    const WeylTail tail = fit_weyl_tail(ev);
    // t -> infinity: zero mode dominance
    CHECK(heat_trace(ev, tail, 50.0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(heat_trace(ev, tail, 50.0, true) == doctest::Approx(0.0).epsilon(1e-10));
    // guard against unreliable small t
    CHECK_THROWS_AS(heat_trace(ev, tail, 1e-6), TailUnreliable);
}

TEST_CASE("heat_trace: football matches the leading model at t=0.1") {
    const EvList ev = football_spectrum(200.0);
    const WeylTail tail = fit_weyl_tail(ev);
    const double tr = heat_trace(ev, tail, 0.1);
    CHECK(tr == doctest::Approx(2.0 / 0.1 + 5.0 / 12.0).epsilon(0.01));
}

TEST_CASE("fit_heat_coeffs: football exact spectrum") {
    // The window floor sits well above 2/lambda_J so the tail-model error
    // stays below the fit's resolving power.
    const EvList ev = football_spectrum(400.0);
    const HeatModel m = fit_heat_coeffs(ev, 1e-4, 0.3, true);
    CHECK(m.c_m1 == doctest::Approx(2.0).epsilon(0.02));
    CHECK(m.c_0 == doctest::Approx(5.0 / 12.0).epsilon(0.05));
    CHECK(std::abs(m.c_mhalf) <= 0.02);
    CHECK(std::abs(m.log_coeff) <= 0.02);
}

TEST_CASE("fit_heat_coeffs: synthetic round sphere calibration") {
    const EvList ev = round_sphere_spectrum(400);
    const HeatModel m = fit_heat_coeffs(ev, 1e-4, 0.3, true);
    CHECK(m.c_m1 == doctest::Approx(1.0).epsilon(0.02));
    CHECK(m.c_0 == doctest::Approx(1.0 / 3.0).epsilon(0.05));
}

TEST_CASE("fit_heat_coeffs: c_1 matches the series value of zeta(-1)") {
    // zeta(-1) = -c_1; the rearranged series gives zeta(-1) = -19/480
    // (the i=0,1,2 terms contribute 1/120-1, 13/12, and the limit -1/4).
    const EvList ev = football_spectrum(300.0);
    const HeatModel m = fit_heat_coeffs(ev, 2e-4, 0.3, true);
    const double zm1 = football_zeta_series(-1.0);
    CHECK(zm1 == doctest::Approx(-19.0 / 480.0).epsilon(1e-10));
    CHECK(m.c_1 == doctest::Approx(-zm1).epsilon(0.02));
}

TEST_CASE("football_zeta_series: residue and value probes") {
    // residue at s=1 equals c_m1 = N = 2: (s-1) zeta(s) -> 2
    const double r1 = (1.001 - 1.0) * football_zeta_series(1.001);
    const double r2 = (1.0001 - 1.0) * football_zeta_series(1.0001);
    CHECK(r2 == doctest::Approx(2.0).epsilon(2e-3));
    CHECK(std::abs(r2 - 2.0) < std::abs(r1 - 2.0));
    // zeta(0) = c_0 - 1 = -7/12 in the limit
    const double z0 = football_zeta_series(1e-7);
    CHECK(z0 == doctest::Approx(-7.0 / 12.0).epsilon(1e-4));
}

TEST_CASE("football_logdet_oracle: frozen value and two-method agreement") {
    const double oracle = football_logdet_oracle(12);
    CHECK(oracle == doctest::Approx(kFootballLogDet).epsilon(1e-9));

    // Independent route: split Mellin assembly on the exact spectrum.
    const EvList ev = football_spectrum(2000.0);
    const HeatModel m = fit_heat_coeffs(ev, 1e-4, 0.3, true);
    const double mellin = log_det_single(ev, m, 0.1);
    CHECK(std::abs(mellin - oracle) < 1e-6);
}

TEST_CASE("log_det: scaling identity logdet(c*lam) = logdet + zeta(0) log c") {
    const EvList ev = football_spectrum(500.0);
    EvList scaled = ev;
    for (double& l : scaled.lam) l *= 2.0;
    const HeatModel m1 = fit_heat_coeffs(ev, 1e-4, 0.3, true);
    const HeatModel m2 = fit_heat_coeffs(scaled, 5e-5, 0.15, true);
    const double d1 = log_det_single(ev, m1, 0.1);
    const double d2 = log_det_single(scaled, m2, 0.05);
    const double zeta0 = m1.c_0 - 1.0;
    CHECK(zeta0 == doctest::Approx(-7.0 / 12.0).epsilon(0.02));
    CHECK(d2 - d1 == doctest::Approx(zeta0 * std::log(2.0)).epsilon(1e-3));
}

TEST_CASE("log_det: split-point independence and zero-mode invariance") {
    const EvList ev = football_spectrum(800.0);
    const HeatModel m = fit_heat_coeffs(ev, 1e-4, 0.3, true);
    const double a = log_det_single(ev, m, 0.1);
    const double b = log_det_single(ev, m, 0.2);
    CHECK(std::abs(a - b) < 1e-6);

    // removing the explicit zero entry must not change anything
    EvList no_zero;
    for (size_t i = 0; i < ev.lam.size(); ++i)
        if (ev.lam[i] > 1e-12) no_zero.push(ev.lam[i], ev.mult[i]);
    const HeatModel m2 = fit_heat_coeffs(no_zero, 1e-4, 0.3, true);
    // c_0 shifts by exactly the dropped constant 1; logdet must agree.
    const double c = log_det_single(no_zero,
                                    [&] {
                                        HeatModel mm = m2;
                                        mm.c_0 += 1.0;
                                        return mm;
                                    }(),
                                    0.1);
    CHECK(std::abs(a - c) < 1e-9);
}

TEST_CASE("fit_heat_coeffs: window validation") {
    const EvList ev = football_spectrum(50.0);
    CHECK_THROWS_AS(fit_heat_coeffs(ev, 1e-9, 0.1, false), TailUnreliable);
    CHECK_THROWS_AS(fit_heat_coeffs(ev, 1e-3, 5.0, false), TailUnreliable);
}

TEST_CASE("richardson3: recovers exact power-law limits") {
    const std::vector<double> Ls = {24, 32, 40};
    for (double p : {1.5, 2.0, 3.0, 4.0}) {
        std::vector<double> ys;
        for (double L : Ls) ys.push_back(7.25 + 3.1 * std::pow(L, -p));
        double rate = 0.0;
        const double lim = richardson3(Ls, ys, &rate);
        CHECK(lim == doctest::Approx(7.25).epsilon(1e-10));
        CHECK(rate == doctest::Approx(p).epsilon(1e-6));
    }
}
