#include "speclab/power_series.hpp"

#include <algorithm>
#include <cmath>

namespace speclab {

PowerSeries PowerSeries::truncated(int order) const {
    std::vector<cplx> r(order + 1, cplx(0.0));
    for (int k = 0; k <= order && k <= this->order(); ++k) r[k] = c_[k];
    return PowerSeries(std::move(r));
}

PowerSeries operator+(const PowerSeries& a, const PowerSeries& b) {
    const int n = std::min(a.order(), b.order());
    PowerSeries r(n);
    for (int k = 0; k <= n; ++k) r.at(k) = a[k] + b[k];
    return r;
}

PowerSeries operator-(const PowerSeries& a, const PowerSeries& b) {
    const int n = std::min(a.order(), b.order());
    PowerSeries r(n);
    for (int k = 0; k <= n; ++k) r.at(k) = a[k] - b[k];
    return r;
}

PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
    const int n = std::min(a.order(), b.order());
    PowerSeries r(n);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j) r.at(i + j) += a[i] * b[j];
    return r;
}

PowerSeries PowerSeries::scaled(cplx s) const {
    PowerSeries r(order());
    for (int k = 0; k <= order(); ++k) r.at(k) = c_[k] * s;
    return r;
}

PowerSeries PowerSeries::sqrt_one_plus(const PowerSeries& h) {
    if (std::abs(h[0]) != 0.0) throw Error("sqrt_one_plus: nonzero constant term");
    const int n = h.order();
    PowerSeries r(n);
    r.at(0) = 1.0;
    PowerSeries pw(n);
    pw.at(0) = 1.0;
    double binom = 1.0; // binom(1/2, k)
    for (int k = 1; k <= n; ++k) {
        binom *= (0.5 - (k - 1)) / k;
        pw = pw * h;
        for (int j = 0; j <= n; ++j) r.at(j) += binom * pw[j];
    }
    return r;
}

PowerSeries compose(const PowerSeries& g, const PowerSeries& f) {
    if (std::abs(f[0]) != 0.0) throw Error("compose: inner series must vanish at 0");
    const int n = std::min(g.order(), f.order());
    PowerSeries r(n);
    // Horner in f.
    for (int k = n; k >= 0; --k) {
        PowerSeries next = r * f;
        next.at(0) += g[k];
        for (int j = 1; j <= n; ++j) next.at(j) = next[j];
        r = next;
    }
    return r;
}

PowerSeries series_invert(const PowerSeries& s) {
    if (std::abs(s[0]) != 0.0) throw NonInvertible("constant term must vanish");
    if (std::abs(s[1]) < 1e-14) throw NonInvertible("linear coefficient below 1e-14");
    const int n = s.order();
    PowerSeries t(n);
    t.at(1) = 1.0 / s[1];
    // Match coefficients order by order: [y^k] s(t(y)) = delta_{k,1}.
    for (int k = 2; k <= n; ++k) {
        const cplx err = compose(s, t)[k];
        t.at(k) = -err / s[1];
    }
    return t;
}

cplx schwarzian_at_zero(const PowerSeries& w_of_x) {
    if (w_of_x.order() < 3) throw Error("schwarzian_at_zero: order must be >= 3");
    const cplx a1 = w_of_x[1], a2 = w_of_x[2], a3 = w_of_x[3];
    if (std::abs(a1) < 1e-14) throw NonInvertible("linear coefficient below 1e-14");
    return 6.0 * a3 / a1 - 6.0 * (a2 / a1) * (a2 / a1);
}

} // namespace speclab
