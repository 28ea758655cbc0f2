#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "speclab/spectral.hpp"
#include "speclab/zeta_det.hpp"

using namespace speclab;
using namespace std::complex_literals;

namespace {

RationalMap square_map() {
    return RationalMap(Poly({0.0, 0.0, 1.0}), Poly({1.0}));
}

} // namespace

TEST_CASE("weight: examples and pole regularization") {
    const WeightField sq = WeightField::for_map(square_map());
    CHECK(sq.weight(SpherePoint(cplx(1.0))) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(sq.weight(SpherePoint(cplx(0.0))) == doctest::Approx(0.0).epsilon(1e-14));

    const WeightField F = WeightField::for_map(RationalMap::degree2_family(0.0, 1.0));
    // Simple pole of F at w=0 with residue 1/4: mu = (1+0)^2/|res|^2 = 16.
    CHECK(F.weight(SpherePoint(cplx(0.0))) == doctest::Approx(16.0).epsilon(1e-10));
    // Continuity against a nearby point.
    CHECK(F.weight(SpherePoint(cplx(1e-4, 0.0))) ==
          doctest::Approx(16.0).epsilon(1e-3));
    // Smooth at infinity too.
    CHECK(std::isfinite(F.weight(SpherePoint::infinity())));
}

TEST_CASE("weight: area integral equals 4 pi N") {
    for (const RationalMap& m :
         {square_map(), RationalMap::degree2_family(cplx(0.3, 0.2), cplx(1.0, -0.5)),
          RationalMap(Poly({0.3, 0.0, 0.0, 1.0}), Poly({-0.11, 0.4, 1.0}))}) {
        const WeightField wf = WeightField::for_map(m);
        const SphGrid grid = grid_for_degree(60, 2);
        double area = 0.0;
        for (int i = 0; i < grid.ntheta(); ++i)
            for (int j = 0; j < grid.nphi; ++j)
                area += grid.wt[i] * grid.phi_weight() *
                        wf.weight(chart_point(grid.t[i], grid.phi(j)));
        CHECK(area == doctest::Approx(4.0 * M_PI * m.degree()).epsilon(1e-8));
    }
}

TEST_CASE("assemble: constant weight gives the identity mass matrix") {
    const WeightField one = WeightField::custom(
        [](const SpherePoint&) { return 1.0; }, 1);
    const GalerkinSystem sys = assemble(one, 8, 1);
    const int nb = sh_count(8);
    CHECK((sys.M - Eigen::MatrixXd::Identity(nb, nb)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(sys.K[sh_index(0, 0)] == 0.0);
    CHECK(sys.K[sh_index(3, -2)] == 12.0);
}

TEST_CASE("assemble: M00 equals the degree for pullback weights") {
    for (const RationalMap& m :
         {square_map(), RationalMap::degree2_family(0.0, 1.0)}) {
        const GalerkinSystem sys = assemble(WeightField::for_map(m), 6, 2);
        CHECK(sys.M(0, 0) == doctest::Approx(m.degree()).epsilon(1e-8));
    }
}

TEST_CASE("solve: football eigenvalues approach nu(nu+1)") {
    const Spectrum spec = solve(WeightField::for_map(square_map()), 24, 14);
    // lambda0 = 0 simple with constant eigenvector: the Y_00 coefficient is
    // 1/sqrt(M00) = 1/sqrt(N), everything else vanishes.
    CHECK(std::abs(spec.values[0]) < 1e-9);
    const double c = spec.vectors(0, 0);
    CHECK(std::abs(std::abs(c) - 1.0 / std::sqrt(2.0)) < 1e-6);
    Eigen::VectorXd rest = spec.vectors.col(0).tail(sh_count(24) - 1);
    CHECK(rest.cwiseAbs().maxCoeff() < 1e-6);

    const std::vector<double> expect = {0.0,  0.75, 0.75, 2.0,  2.0,
                                        2.0,  3.75, 3.75, 3.75, 3.75,
                                        6.0,  6.0,  6.0,  6.0,  6.0};
    for (int j = 1; j < 15; ++j)
        CHECK(spec.values[j] == doctest::Approx(expect[j]).epsilon(2e-3));

    // group structure 1,2,3,4,5
    CHECK(spec.group_id[0] == 0);
    CHECK(spec.group_id[1] == 1);
    CHECK(spec.group_id[2] == 1);
    CHECK(spec.group_id[3] == 2);
    CHECK(spec.group_id[5] == 2);
    CHECK(spec.group_id[9] == 3);
    CHECK(spec.group_id[14] == 4);
}

TEST_CASE("solve: Rayleigh-Ritz monotonicity in L") {
    const WeightField wf = WeightField::for_map(RationalMap::degree2_family(0.0, 1.0));
    const Spectrum s1 = solve(wf, 12, 10);
    const Spectrum s2 = solve(wf, 16, 10);
    for (int j = 0; j <= 40; ++j)
        CHECK(s2.values[j] <= s1.values[j] + 1e-12);
}

TEST_CASE("solve: M-orthonormality and residuals for reliable modes") {
    const WeightField wf = WeightField::for_map(RationalMap::degree2_family(0.0, 1.0));
    const int L = 12;
    const Spectrum spec = solve(wf, L, 20);
    const GalerkinSystem sys = assemble(wf, L);
    const int nr = spec.reliable_count;
    const Eigen::MatrixXd V = spec.vectors.leftCols(nr);
    const Eigen::MatrixXd G = V.transpose() * sys.M * V;
    CHECK((G - Eigen::MatrixXd::Identity(nr, nr)).cwiseAbs().maxCoeff() < 1e-8);
    for (int j = 0; j < nr; ++j) {
        const Eigen::VectorXd r =
            sys.K.asDiagonal() * spec.vectors.col(j) -
            spec.values[j] * (sys.M * spec.vectors.col(j));
        CHECK(r.norm() <= 1e-8 * spec.vectors.col(j).norm() * (1.0 + spec.values[j]));
    }
}

TEST_CASE("eigenfunction_deriv: zero mode, synthetic harmonic, FD cross-check") {
    const WeightField wf = WeightField::for_map(square_map());
    const Spectrum spec = solve(wf, 16, 10);
    CHECK(std::abs(eigenfunction_deriv(spec, wf, 0, cplx(0.3, 0.1))) < 1e-8);

    // Synthetic vector = Y_{1,0}: value sqrt(3/4pi) * t, t = (1-|w|^2)/(1+|w|^2).
    Spectrum synth = spec;
    synth.vectors.col(1).setZero();
    synth.vectors(sh_index(1, 0), 1) = 1.0;
    const double n10 = std::sqrt(3.0 / (4.0 * M_PI));
    // d/dw of t is -2 wbar / (1+|w|^2)^2 -> 0 at w=0.
    CHECK(std::abs(eigenfunction_deriv(synth, wf, 1, cplx(0.0))) < 1e-12);
    const cplx w0(0.4, -0.2);
    const cplx want = n10 * (-2.0 * std::conj(w0)) / std::pow(1.0 + std::norm(w0), 2);
    CHECK(std::abs(eigenfunction_deriv(synth, wf, 1, w0) - want) < 1e-12);

    // Finite-difference cross-check on a genuine eigenfunction, both charts.
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-1.4, 1.4);
    const double h = 1e-5;
    for (int trial = 0; trial < 12; ++trial) {
        const cplx w(u(rng), u(rng));
        if (std::abs(w) < 0.05 || std::abs(std::abs(w) - 1.0) < 0.02) continue;
        const int j = 1 + trial % 5;
        auto val = [&](cplx p) { return eigenfunction_value(spec, j, SpherePoint(p)); };
        const double fr = (val(w + h) - val(w - h)) / (2.0 * h);
        const double fi = (val(w + 1i * h) - val(w - 1i * h)) / (2.0 * h);
        const cplx dw = 0.5 * fr - 0.5i * fi;
        const cplx got = eigenfunction_deriv(spec, wf, j, w);
        CHECK(std::abs(got - dw) < 1e-6 * (1.0 + std::abs(dw)));
        const cplx gotc = eigenfunction_deriv_conj(spec, j, w);
        const cplx dwb = 0.5 * fr + 0.5i * fi;
        CHECK(std::abs(gotc - dwb) < 1e-6 * (1.0 + std::abs(dwb)));
    }

    // w = 0 limit agrees with a small-circle finite difference.
    const int j = 2;
    auto val = [&](cplx p) { return eigenfunction_value(spec, j, SpherePoint(p)); };
    const double f0r = (val(cplx(h)) - val(cplx(-h))) / (2.0 * h);
    const double f0i = (val(1i * h) - val(-1i * h)) / (2.0 * h);
    const cplx dw0 = 0.5 * f0r - 0.5i * f0i;
    CHECK(std::abs(eigenfunction_deriv(spec, wf, j, cplx(0.0)) - dw0) < 1e-7);
}

TEST_CASE("cone_coeffs: football cone at w=0") {
    const RationalMap sq = square_map();
    const WeightField wf = WeightField::for_map(sq);
    const CriticalData data = critical_data(sq);
    const Spectrum spec = solve(wf, 20, 14);
    const FrameData frame = schiffer_at_critical(sq, data, 0);
    const ConeCoeffs cc = cone_coeffs(spec, wf, data, frame, 0);

    // zero mode: b=0, c = 1/sqrt(4 pi N) up to sign
    CHECK(std::abs(cc.b[0]) < 1e-8);
    CHECK(std::abs(std::abs(cc.c[0]) - 1.0 / std::sqrt(8.0 * M_PI)) < 1e-6);

    // a_j = conj(b_j) for real eigenfunctions
    CHECK(cc.max_conj_violation < 1e-8);

    // lambda = 3/4 group: the individual b_j are nonzero, but the group sum
    // of b_j^2 vanishes -- the (0, inf) cone pair is fixed by the rotations
    // z -> e^{i alpha} z, so every first variation is zero at this point.
    cplx sum = 0.0;
    double abs2 = 0.0;
    for (int j : spec.group_members(spec.group_id[1])) {
        sum += cc.b[j] * cc.b[j];
        abs2 += std::norm(cc.b[j]);
    }
    CHECK(abs2 > 0.05);
    CHECK(std::abs(sum) < 1e-8 * abs2);

    // branch flip: b -> -b, b^2 unchanged
    FrameData flipped = frame;
    flipped.sqrt_c2 = -frame.sqrt_c2;
    const ConeCoeffs cc2 = cone_coeffs(spec, wf, data, flipped, 0);
    CHECK(std::abs(cc2.b[1] + cc.b[1]) < 1e-12);
}

TEST_CASE("cone_coeffs: asymmetric configuration has nonzero group sums") {
    // F[0,1]: the first two groups are simple with sum b^2 != 0; the exact
    // lambda = 2 triple (pullbacks of degree-1 harmonics) has b = 0.
    const RationalMap F = RationalMap::degree2_family(0.0, 1.0);
    const WeightField wf = WeightField::for_map(F);
    const CriticalData data = critical_data(F);
    const Spectrum spec = solve(wf, 20, 14);
    const FrameData frame = schiffer_at_critical(F, data, 0);
    const ConeCoeffs cc = cone_coeffs(spec, wf, data, frame, 0);
    auto group_sum = [&](int g) {
        cplx s = 0.0;
        for (int j : spec.group_members(g)) s += cc.b[j] * cc.b[j];
        return s;
    };
    CHECK(std::abs(group_sum(1)) > 1e-3);
    CHECK(std::abs(group_sum(2)) > 1e-3);
    CHECK(spec.group_members(3).size() == 3);
    CHECK(spec.values[spec.group_members(3)[0]] == doctest::Approx(2.0).epsilon(1e-4));
    CHECK(std::abs(group_sum(3)) < 1e-10);
}

TEST_CASE("solve: SU(2) invariance of the spectrum") {
    const RationalMap F = RationalMap::degree2_family(0.0, 1.0);
    const double s = 1.0 / std::sqrt(2.0);
    const RationalMap G = rotate_target(F, TargetRotation(s, -1i * s));
    const Spectrum sF = solve(WeightField::for_map(F), 16, 12);
    const Spectrum sG = solve(WeightField::for_map(G), 16, 12);
    for (int j = 0; j <= 12; ++j)
        CHECK(sF.values[j] == doctest::Approx(sG.values[j]).epsilon(1e-8));
}

TEST_CASE("solve rejects oversized J; assemble rejects tiny L") {
    const WeightField wf = WeightField::for_map(square_map());
    CHECK_THROWS(solve(wf, 4, 25));
    CHECK_THROWS(assemble(wf, 1));
}
