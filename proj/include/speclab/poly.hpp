#ifndef SPECLAB_POLY_HPP
#define SPECLAB_POLY_HPP

#include <vector>

#include "speclab/sphere_point.hpp"

namespace speclab {

// Dense polynomial with complex coefficients, ascending degree.
class Poly {
public:
    Poly() : c_{cplx(0.0)} {}
    explicit Poly(std::vector<cplx> coeffs);
    static Poly monomial(int degree, cplx lead = 1.0);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<cplx>& coeffs() const { return c_; }
    cplx coeff(int k) const { return k >= 0 && k < (int)c_.size() ? c_[k] : cplx(0.0); }
    bool is_zero() const;
    double max_abs_coeff() const;

    cplx eval(cplx w) const;
    void eval_with_deriv(cplx w, cplx& p, cplx& dp) const;
    Poly derivative() const;
    // Coefficients of p(w0 + u) in u.
    Poly taylor_shift(cplx w0) const;
    // w^n * p(1/w) for n = degree(); used for the 1/w chart.
    Poly reversed() const;
    Poly scaled(cplx s) const;
    // Drop trailing coefficients below rel_tol * max|c|.
    Poly trimmed(double rel_tol = 1e-13) const;

    friend Poly operator+(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a, const Poly& b);
    friend Poly operator*(const Poly& a, const Poly& b);

    // All complex roots, companion-matrix eigenvalues polished by Newton.
    // Throws RootFindingFailure when polishing stalls on a residual above
    // rel_tol * scale.
    std::vector<cplx> roots(double rel_tol = 1e-10) const;

private:
    std::vector<cplx> c_;
};

} // namespace speclab

#endif
