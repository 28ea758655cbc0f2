#ifndef SPECLAB_POWER_SERIES_HPP
#define SPECLAB_POWER_SERIES_HPP

#include <vector>

#include "speclab/sphere_point.hpp"

namespace speclab {

// Truncated power series; arithmetic never silently extends the order
// (binary operations truncate to the shorter operand).
class PowerSeries {
public:
    explicit PowerSeries(int order) : c_(order + 1, cplx(0.0)) {}
    explicit PowerSeries(std::vector<cplx> coeffs) : c_(std::move(coeffs)) {
        if (c_.empty()) c_ = {cplx(0.0)};
    }

    int order() const { return static_cast<int>(c_.size()) - 1; }
    cplx operator[](int k) const { return k <= order() ? c_[k] : cplx(0.0); }
    cplx& at(int k) { return c_[k]; }
    const std::vector<cplx>& coeffs() const { return c_; }

    PowerSeries truncated(int order) const;

    friend PowerSeries operator+(const PowerSeries& a, const PowerSeries& b);
    friend PowerSeries operator-(const PowerSeries& a, const PowerSeries& b);
    friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b);
    PowerSeries scaled(cplx s) const;

    // (1 + h)^{1/2} for a series h with zero constant term.
    static PowerSeries sqrt_one_plus(const PowerSeries& h);

private:
    std::vector<cplx> c_;
};

// g(f(x)) for f with zero constant term.
PowerSeries compose(const PowerSeries& g, const PowerSeries& f);

// Compositional inverse t of s: s(t(y)) = y up to the truncation order.
// Requires zero constant term; throws NonInvertible when the linear
// coefficient is below 1e-14.
PowerSeries series_invert(const PowerSeries& s);

// {w,x}(0) = w'''/w' - (3/2)(w''/w')^2 at x = 0 from the first four
// coefficients of w(x) (zero constant term, nonzero linear coefficient).
cplx schwarzian_at_zero(const PowerSeries& w_of_x);

} // namespace speclab

#endif
