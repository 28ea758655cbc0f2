#ifndef SPECLAB_SPHERE_POINT_HPP
#define SPECLAB_SPHERE_POINT_HPP

#include <cmath>
#include <complex>
#include <limits>

#include "speclab/errors.hpp"

namespace speclab {

using cplx = std::complex<double>;

inline bool is_finite(cplx z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Point on the Riemann sphere.  Infinity carries an explicit tag; stored
// finite values are required to have finite components.
class SpherePoint {
public:
    SpherePoint() : v_(0.0, 0.0), inf_(false) {}
    SpherePoint(cplx v) : v_(v), inf_(false) {  // NOLINT: implicit by design
        if (!is_finite(v)) throw Error("SpherePoint: non-finite components");
    }
    static SpherePoint infinity() {
        SpherePoint p;
        p.inf_ = true;
        return p;
    }

    bool is_inf() const { return inf_; }
    cplx value() const {
        if (inf_) throw Error("SpherePoint: value() at infinity");
        return v_;
    }
    // Coordinate in the chart where this point is finite: z itself, or 1/z.
    cplx chart_value() const { return inf_ ? cplx(0.0) : v_; }

    friend bool operator==(const SpherePoint& a, const SpherePoint& b) {
        if (a.inf_ || b.inf_) return a.inf_ && b.inf_;
        return a.v_ == b.v_;
    }

private:
    cplx v_;
    bool inf_;
};

// Chordal distance on the unit sphere; d(z,w) <= 2, with infinity handled
// uniformly.  d(z,inf) = 2/sqrt(1+|z|^2).
inline double chordal_distance(const SpherePoint& a, const SpherePoint& b) {
    if (a.is_inf() && b.is_inf()) return 0.0;
    if (a.is_inf()) return 2.0 / std::sqrt(1.0 + std::norm(b.value()));
    if (b.is_inf()) return 2.0 / std::sqrt(1.0 + std::norm(a.value()));
    const cplx za = a.value(), zb = b.value();
    return 2.0 * std::abs(za - zb) /
           std::sqrt((1.0 + std::norm(za)) * (1.0 + std::norm(zb)));
}

} // namespace speclab

#endif
