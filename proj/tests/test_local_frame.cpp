#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "speclab/local_frame.hpp"

using namespace speclab;
using namespace std::complex_literals;

namespace {

PowerSeries series(std::initializer_list<cplx> coeffs) {
    return PowerSeries(std::vector<cplx>(coeffs));
}

} // namespace

TEST_CASE("series_invert: identity, linear, quadratic") {
    const PowerSeries id = series({0.0, 1.0, 0.0, 0.0, 0.0});
    const PowerSeries t1 = series_invert(id);
    CHECK(std::abs(t1[1] - cplx(1.0)) < 1e-15);

    const PowerSeries lin = series({0.0, 2.0, 0.0, 0.0, 0.0});
    CHECK(std::abs(series_invert(lin)[1] - cplx(0.5)) < 1e-15);

    // s = w + w^2  ->  t = y - y^2 + 2y^3 - 5y^4
    const PowerSeries s = series({0.0, 1.0, 1.0, 0.0, 0.0});
    const PowerSeries t = series_invert(s);
    CHECK(std::abs(t[1] - cplx(1.0)) < 1e-14);
    CHECK(std::abs(t[2] - cplx(-1.0)) < 1e-14);
    CHECK(std::abs(t[3] - cplx(2.0)) < 1e-14);
    CHECK(std::abs(t[4] - cplx(-5.0)) < 1e-14);
    // Composing back must give the identity through the truncation order.
    const PowerSeries back = compose(s, t);
    CHECK(std::abs(back[1] - cplx(1.0)) < 1e-14);
    for (int k = 2; k <= 4; ++k) CHECK(std::abs(back[k]) < 1e-13);
}

TEST_CASE("series_invert: random series compose to identity") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        PowerSeries s(8);
        s.at(1) = cplx(g(rng), g(rng));
        if (std::abs(s[1]) < 0.1) s.at(1) += 1.0;
        for (int k = 2; k <= 8; ++k) s.at(k) = 0.5 * cplx(g(rng), g(rng));
        const PowerSeries t = series_invert(s);
        double tscale = 1.0;
        for (int k = 1; k <= 8; ++k) tscale = std::max(tscale, std::abs(t[k]));
        const PowerSeries back = compose(s, t);
        CHECK(std::abs(back[1] - cplx(1.0)) < 1e-12 * tscale);
        for (int k = 2; k <= 8; ++k) CHECK(std::abs(back[k]) < 1e-11 * tscale * tscale);
    }
}

TEST_CASE("series_invert: rejects vanishing linear coefficient") {
    CHECK_THROWS_AS(series_invert(series({0.0, 1e-15, 1.0, 0.0, 0.0})), NonInvertible);
}

TEST_CASE("schwarzian_at_zero: Moebius maps annihilated") {
    CHECK(std::abs(schwarzian_at_zero(series({0.0, 1.0, 0.0, 0.0, 0.0}))) < 1e-14);
    // x/(1-x) = x + x^2 + x^3 + x^4
    CHECK(std::abs(schwarzian_at_zero(series({0.0, 1.0, 1.0, 1.0, 1.0}))) < 1e-13);
    // Exact rational-arithmetic example: w = y - y^2/2 + y^3/8 -> -3/4.
    CHECK(std::abs(schwarzian_at_zero(series({0.0, 1.0, -0.5, 0.125, 0.0})) -
                   cplx(-0.75)) < 1e-14);
}

TEST_CASE("schwarzian scaling: x -> kappa x divides the value by kappa^2") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        PowerSeries w(5);
        w.at(1) = 1.0;
        for (int k = 2; k <= 5; ++k) w.at(k) = cplx(g(rng), g(rng));
        const cplx kappa(1.0 + 0.5 * g(rng), 0.5 * g(rng));
        PowerSeries wk(5); // w(kappa x)
        cplx pw = 1.0;
        for (int k = 1; k <= 5; ++k) {
            pw *= kappa;
            wk.at(k) = w[k] * pw;
        }
        const cplx s0 = schwarzian_at_zero(w);
        const cplx s1 = schwarzian_at_zero(wk);
        CHECK(std::abs(s1 - s0 * kappa * kappa) < 1e-10 * (1.0 + std::abs(s0)));
    }
}

TEST_CASE("schiffer_at_critical: exact chart change for w^2") {
    const RationalMap sq(Poly({0.0, 0.0, 1.0}), Poly({1.0}));
    const CriticalData data = critical_data(sq);
    const FrameData fr = schiffer_at_critical(sq, data, 0); // cone at w=0, z=0
    CHECK(std::abs(fr.schiffer) < 1e-13);
    CHECK(std::abs(fr.b0) < 1e-13);
    CHECK(fr.binf_valid);
    CHECK(std::abs(fr.binf) < 1e-13);
}

TEST_CASE("schiffer_at_critical: degree-2 closed form -3/(z1-z2)") {
    const RationalMap F = RationalMap::degree2_family(0.0, 1.0);
    const CriticalData data = critical_data(F);
    const FrameData f1 = schiffer_at_critical(F, data, 0);
    CHECK(std::abs(f1.schiffer - cplx(3.0)) < 1e-12);
    CHECK(std::abs(f1.b0 - cplx(-0.5)) < 1e-12);
    CHECK(std::abs(f1.binf) < 1e-14);
    const FrameData f2 = schiffer_at_critical(F, data, 1);
    CHECK(std::abs(f2.schiffer - cplx(-3.0)) < 1e-12);
    CHECK(std::abs(f2.b0 - cplx(0.5)) < 1e-12);
    CHECK(std::abs(f2.binf - cplx(0.25)) < 1e-14);

    std::mt19937_64 rng(23);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const cplx z1(g(rng), g(rng)), z2(g(rng), g(rng));
        if (std::abs(z1 - z2) < 0.1) continue;
        const RationalMap Fz = RationalMap::degree2_family(z1, z2);
        const CriticalData dz = critical_data(Fz);
        // Identify the cone whose value is z1 (sorting is by value).
        for (int k = 0; k < 2; ++k) {
            const cplx zk = dz.points[k].value.value();
            const cplx other = dz.points[1 - k].value.value();
            const cplx want = -3.0 / (zk - other);
            const FrameData fr = schiffer_at_critical(Fz, dz, k);
            CHECK(std::abs(fr.schiffer - want) < 1e-8 * std::abs(want));
        }
    }
}

TEST_CASE("schiffer branch independence under sqrt_c2 flip") {
    // The Schwarzian is even under x -> -x: rebuild the frame with the other
    // branch by scaling the series and compare.
    const RationalMap F = RationalMap::degree2_family(cplx(0.3, 0.2), cplx(1.1, -0.4));
    const CriticalData data = critical_data(F);
    const FrameData fr = schiffer_at_critical(F, data, 0);
    PowerSeries flipped(fr.w_of_x.order());
    cplx sign = 1.0;
    for (int k = 1; k <= fr.w_of_x.order(); ++k) {
        sign = -sign;
        flipped.at(k) = fr.w_of_x[k] * sign; // w(-x)
    }
    CHECK(std::abs(schwarzian_at_zero(flipped) - fr.schiffer) <
          1e-12 * (1.0 + std::abs(fr.schiffer)));
}

TEST_CASE("variational_rhs: degree-2 values and cross-route identity") {
    const RationalMap F = RationalMap::degree2_family(0.0, 1.0);
    const CriticalData data = critical_data(F);
    CHECK(std::abs(variational_rhs(F, data, 0) - cplx(-0.25)) < 1e-12);
    CHECK(std::abs(variational_rhs(F, data, 1) - cplx(0.125)) < 1e-12);
}

TEST_CASE("variational_rhs: infinite critical value is rejected") {
    const RationalMap sq(Poly({0.0, 0.0, 1.0}), Poly({1.0}));
    const CriticalData data = critical_data(sq);
    CHECK_THROWS_AS(variational_rhs(sq, data, 1), InfiniteCriticalValue);
}
