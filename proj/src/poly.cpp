#include "speclab/poly.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace speclab {

Poly::Poly(std::vector<cplx> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) c_ = {cplx(0.0)};
    for (const cplx& z : c_)
        if (!is_finite(z)) throw Error("Poly: non-finite coefficient");
}

Poly Poly::monomial(int degree, cplx lead) {
    std::vector<cplx> c(degree + 1, cplx(0.0));
    c[degree] = lead;
    return Poly(std::move(c));
}

bool Poly::is_zero() const {
    for (const cplx& z : c_)
        if (z != cplx(0.0)) return false;
    return true;
}

double Poly::max_abs_coeff() const {
    double m = 0.0;
    for (const cplx& z : c_) m = std::max(m, std::abs(z));
    return m;
}

cplx Poly::eval(cplx w) const {
    cplx p = 0.0;
    for (int k = degree(); k >= 0; --k) p = p * w + c_[k];
    return p;
}

void Poly::eval_with_deriv(cplx w, cplx& p, cplx& dp) const {
    p = 0.0;
    dp = 0.0;
    for (int k = degree(); k >= 0; --k) {
        dp = dp * w + p;
        p = p * w + c_[k];
    }
}

Poly Poly::derivative() const {
    if (degree() == 0) return Poly();
    std::vector<cplx> d(degree());
    for (int k = 1; k <= degree(); ++k) d[k - 1] = c_[k] * double(k);
    return Poly(std::move(d));
}

Poly Poly::taylor_shift(cplx w0) const {
    // In-place Horner shift: coefficients of p(w0 + u).
    std::vector<cplx> a = c_;
    const int n = degree();
    for (int i = 0; i < n; ++i)
        for (int j = n - 1; j >= i; --j) a[j] += w0 * a[j + 1];
    return Poly(std::move(a));
}

Poly Poly::reversed() const {
    std::vector<cplx> r(c_.rbegin(), c_.rend());
    return Poly(std::move(r));
}

Poly Poly::scaled(cplx s) const {
    std::vector<cplx> r = c_;
    for (cplx& z : r) z *= s;
    return Poly(std::move(r));
}

Poly Poly::trimmed(double rel_tol) const {
    const double tol = rel_tol * max_abs_coeff();
    int d = degree();
    while (d > 0 && std::abs(c_[d]) <= tol) --d;
    return Poly(std::vector<cplx>(c_.begin(), c_.begin() + d + 1));
}

Poly operator+(const Poly& a, const Poly& b) {
    std::vector<cplx> r(std::max(a.c_.size(), b.c_.size()), cplx(0.0));
    for (size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
    return Poly(std::move(r));
}

Poly operator-(const Poly& a, const Poly& b) {
    std::vector<cplx> r(std::max(a.c_.size(), b.c_.size()), cplx(0.0));
    for (size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) r[i] -= b.c_[i];
    return Poly(std::move(r));
}

Poly operator*(const Poly& a, const Poly& b) {
    std::vector<cplx> r(a.c_.size() + b.c_.size() - 1, cplx(0.0));
    for (size_t i = 0; i < a.c_.size(); ++i)
        for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(r));
}

std::vector<cplx> Poly::roots(double rel_tol) const {
    const Poly p = trimmed();
    const int n = p.degree();
    if (n == 0) return {};
    std::vector<cplx> rts;
    if (n == 1) {
        rts = {-p.c_[0] / p.c_[1]};
    } else if (n == 2) {
        // Stable quadratic formula.
        const cplx a = p.c_[2], b = p.c_[1], c0 = p.c_[0];
        const cplx disc = std::sqrt(b * b - 4.0 * a * c0);
        const cplx q = (std::real(std::conj(b) * disc) >= 0.0) ? -0.5 * (b + disc)
                                                               : -0.5 * (b - disc);
        if (std::abs(q) > 0.0) {
            rts = {q / a, c0 / q};
        } else {
            rts = {cplx(0.0), cplx(0.0)};
        }
    } else {
        Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
        for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
        for (int i = 0; i < n; ++i) comp(i, n - 1) = -p.c_[i] / p.c_[n];
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
        for (int i = 0; i < n; ++i) rts.push_back(es.eigenvalues()[i]);
    }

    // Newton polish on the original polynomial.  Multiple roots converge
    // slowly; accept them by the relaxed cluster criterion below.
    const double scale = p.max_abs_coeff();
    for (cplx& r : rts) {
        for (int it = 0; it < 50; ++it) {
            cplx pv, dv;
            p.eval_with_deriv(r, pv, dv);
            if (std::abs(pv) <= 1e-15 * scale * std::max(1.0, std::pow(std::abs(r), n)))
                break;
            if (std::abs(dv) < 1e-300) break;
            const cplx step = pv / dv;
            r -= step;
            if (std::abs(step) < 1e-16 * (1.0 + std::abs(r))) break;
        }
    }
    for (const cplx& r : rts) {
        const double local = scale * std::max(1.0, std::pow(std::abs(r), n));
        if (std::abs(p.eval(r)) > rel_tol * local)
            throw RootFindingFailure("residual above tolerance after polishing");
    }
    std::sort(rts.begin(), rts.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return rts;
}

} // namespace speclab
