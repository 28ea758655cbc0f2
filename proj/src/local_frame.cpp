#include "speclab/local_frame.hpp"

#include <cmath>

namespace speclab {

namespace {
constexpr int kFrameOrder = 6; // Schwarzian needs 4 coefficients; extra guards cancellation
}

FrameData schiffer_at_critical(const RationalMap& map, const CriticalData& data,
                               int k) {
    (void)map;
    if (k < 0 || k >= (int)data.points.size())
        throw Error("schiffer_at_critical: index out of range");
    const CriticalPoint& cp = data.points[k];
    if (!cp.simple || std::abs(cp.c2) < 1e-12)
        throw DegenerateCritical("c2 vanishes; distinguished parameter undefined");
    if (cp.value_chart_inverted)
        throw InfiniteCriticalValue("x = sqrt(z - z_k) needs finite z_k");

    FrameData fr;
    fr.k = k;
    fr.sqrt_c2 = std::sqrt(cp.c2);

    // x(u) = sqrt(c2) * u * (1 + (c3/c2) u + (c4/c2) u^2)^{1/2}; the chart of
    // the critical point (w or 1/w) is immaterial for the Schwarzian since the
    // two cover coordinates differ by a Moebius map.
    PowerSeries h(kFrameOrder);
    h.at(1) = cp.c3 / cp.c2;
    h.at(2) = cp.c4 / cp.c2;
    PowerSeries u(kFrameOrder);
    u.at(1) = 1.0;
    const PowerSeries x_of_u =
        (u * PowerSeries::sqrt_one_plus(h)).scaled(fr.sqrt_c2);
    fr.w_of_x = series_invert(x_of_u);
    fr.schiffer = schwarzian_at_zero(fr.w_of_x);
    fr.b0 = -fr.schiffer / 6.0;
    if (!cp.value.is_inf()) {
        const cplx z = cp.value.value();
        fr.binf = 0.5 * std::conj(z) / (1.0 + std::norm(z));
        fr.binf_valid = true;
    }
    return fr;
}

cplx variational_rhs(const FrameData& frame, const SpherePoint& z_k) {
    if (z_k.is_inf()) throw InfiniteCriticalValue("variational_rhs needs finite z_k");
    const cplx z = z_k.value();
    const cplx via_b = (frame.b0 - frame.binf_checked()) / 2.0;
    const cplx direct =
        -frame.schiffer / 12.0 - 0.25 * std::conj(z) / (1.0 + std::norm(z));
    if (std::abs(via_b - direct) > 1e-12 * (1.0 + std::abs(direct)))
        throw Error("variational_rhs: cross-route mismatch");
    return via_b;
}

cplx variational_rhs(const RationalMap& map, const CriticalData& data, int k) {
    const FrameData fr = schiffer_at_critical(map, data, k);
    return variational_rhs(fr, data.points[k].value);
}

} // namespace speclab
