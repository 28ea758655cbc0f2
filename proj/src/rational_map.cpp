#include "speclab/rational_map.hpp"

#include <algorithm>
#include <cmath>

namespace speclab {

namespace {

// Truncated division A/B of power series given as ascending coefficient
// arrays; requires B[0] != 0.
std::vector<cplx> series_div(const std::vector<cplx>& a, const std::vector<cplx>& b,
                             int order) {
    std::vector<cplx> t(order + 1, cplx(0.0));
    for (int k = 0; k <= order; ++k) {
        cplx s = k < (int)a.size() ? a[k] : cplx(0.0);
        for (int i = 0; i < k; ++i) {
            const int j = k - i;
            if (j < (int)b.size()) s -= t[i] * b[j];
        }
        t[k] = s / b[0];
    }
    return t;
}

std::vector<cplx> first_coeffs(const Poly& p, int order) {
    std::vector<cplx> c(order + 1, cplx(0.0));
    for (int k = 0; k <= order && k <= p.degree(); ++k) c[k] = p.coeff(k);
    return c;
}

} // namespace

TargetRotation::TargetRotation(cplx a_, cplx b_) : a(a_), b(b_) {
    const double n = std::norm(a) + std::norm(b);
    if (std::abs(n - 1.0) > 1e-12)
        throw Error("TargetRotation: |a|^2 + |b|^2 must be 1");
}

SpherePoint TargetRotation::apply(const SpherePoint& z) const {
    if (z.is_inf()) {
        // limit of (a z + b)/(-conj(b) z + conj(a)) as z -> infinity
        if (std::abs(b) == 0.0) return SpherePoint::infinity();
        return SpherePoint(a / (-std::conj(b)));
    }
    const cplx zn = a * z.value() + b;
    const cplx zd = -std::conj(b) * z.value() + std::conj(a);
    if (std::abs(zd) == 0.0) return SpherePoint::infinity();
    const cplx v = zn / zd;
    if (!is_finite(v)) return SpherePoint::infinity();
    return SpherePoint(v);
}

TargetRotation TargetRotation::compose(const TargetRotation& first) const {
    // SU(2) matrix product [[a,b],[-conj b, conj a]] * first.
    const cplx na = a * first.a - b * std::conj(first.b);
    const cplx nb = a * first.b + b * std::conj(first.a);
    const double n = std::sqrt(std::norm(na) + std::norm(nb));
    return TargetRotation(na / n, nb / n);
}

RationalMap::RationalMap(Poly numerator, Poly denominator)
    : p_(numerator.trimmed()), q_(denominator.trimmed()) {
    if (q_.is_zero()) throw Error("RationalMap: zero denominator");
    if (p_.is_zero()) throw Error("RationalMap: zero numerator (constant map)");
    // Monic denominator for canonical equality tests.
    const cplx lead = q_.coeff(q_.degree());
    p_ = p_.scaled(1.0 / lead);
    q_ = q_.scaled(1.0 / lead);
    N_ = std::max(p_.degree(), q_.degree());
    if (N_ < 2) throw Error("RationalMap: degree must be >= 2");
    // Coprimality: numerator must not vanish at denominator roots.
    if (q_.degree() > 0) {
        const double scale = p_.max_abs_coeff();
        for (const cplx& r : q_.roots(1e-8)) {
            const double local = scale * std::max(1.0, std::pow(std::abs(r), p_.degree()));
            if (std::abs(p_.eval(r)) < 1e-10 * local)
                throw Error("RationalMap: numerator and denominator share a root");
        }
    }
}

RationalMap RationalMap::degree2_family(cplx z1, cplx z2) {
    const cplx c = (z2 - z1) / 4.0;
    const cplx m = (z1 + z2) / 2.0;
    // ((z2-z1)/4) w^2 + ((z1+z2)/2) w + (z2-z1)/4  over  w
    return RationalMap(Poly({c, m, c}), Poly({cplx(0.0), cplx(1.0)}));
}

void RationalMap::inverted_chart(Poly& num_s, Poly& den_s) const {
    const int dp = p_.degree(), dq = q_.degree();
    Poly rp = p_.reversed(), rq = q_.reversed();
    if (dq >= dp) {
        num_s = Poly::monomial(dq - dp) * rp;
        den_s = rq;
    } else {
        num_s = rp;
        den_s = Poly::monomial(dp - dq) * rq;
    }
}

namespace {

void eval_chart_pair(const Poly& A, const Poly& B, cplx x, SpherePoint& val,
                     SpherePoint& deriv) {
    cplx n, dn, d, dd;
    A.eval_with_deriv(x, n, dn);
    B.eval_with_deriv(x, d, dd);
    if (std::abs(d) == 0.0) {
        val = SpherePoint::infinity();
        deriv = SpherePoint::infinity();
        return;
    }
    const cplx v = n / d;
    val = is_finite(v) ? SpherePoint(v) : SpherePoint::infinity();
    const cplx dv = (dn * d - n * dd) / (d * d);
    deriv = is_finite(dv) ? SpherePoint(dv) : SpherePoint::infinity();
}

} // namespace

void RationalMap::evaluate(const SpherePoint& w, SpherePoint& f,
                           SpherePoint& fprime) const {
    if (!w.is_inf() && std::abs(w.value()) <= 1.0) {
        eval_chart_pair(p_, q_, w.value(), f, fprime);
        return;
    }
    Poly ns, ds;
    inverted_chart(ns, ds);
    const cplx s = w.is_inf() ? cplx(0.0) : 1.0 / w.value();
    SpherePoint g, gprime;
    eval_chart_pair(ns, ds, s, g, gprime);
    f = g;
    if (gprime.is_inf()) {
        fprime = SpherePoint::infinity();
    } else {
        const cplx dv = gprime.value() * (-s * s); // df/dw = g'(s) ds/dw
        fprime = is_finite(dv) ? SpherePoint(dv) : SpherePoint::infinity();
        if (w.is_inf() && std::abs(gprime.value()) > 0.0)
            fprime = SpherePoint::infinity(); // chart derivative blows up at w = inf
    }
}

SpherePoint RationalMap::operator()(const SpherePoint& w) const {
    SpherePoint f, fp;
    evaluate(w, f, fp);
    return f;
}

bool RationalMap::coefficients_close(const RationalMap& other, double tol) const {
    if (p_.degree() != other.p_.degree() || q_.degree() != other.q_.degree())
        return false;
    const double scale = std::max(p_.max_abs_coeff(), 1.0);
    for (int k = 0; k <= p_.degree(); ++k)
        if (std::abs(p_.coeff(k) - other.p_.coeff(k)) > tol * scale) return false;
    for (int k = 0; k <= q_.degree(); ++k)
        if (std::abs(q_.coeff(k) - other.q_.coeff(k)) > tol * scale) return false;
    return true;
}

namespace {

// Taylor data of the map around a chart point; flips the target chart when
// the value is (numerically) infinite.
CriticalPoint taylor_at(const Poly& A, const Poly& B, cplx x0, bool chart_inverted,
                        double tol) {
    CriticalPoint cp;
    cp.point_chart_inverted = chart_inverted;
    const Poly As = A.taylor_shift(x0);
    const Poly Bs = B.taylor_shift(x0);
    const double scale = std::max(A.max_abs_coeff(), B.max_abs_coeff());
    const bool pole = std::abs(Bs.coeff(0)) <= 1e-13 * scale *
                                                   std::max(1.0, std::abs(As.coeff(0)) /
                                                                     std::max(scale, 1e-300));
    std::vector<cplx> t;
    if (!pole) {
        t = series_div(first_coeffs(As, 4), first_coeffs(Bs, 4), 4);
        cp.value = SpherePoint(t[0]);
        cp.value_chart_inverted = false;
    } else {
        // Critical value at infinity: expand 1/f instead.
        t = series_div(first_coeffs(Bs, 4), first_coeffs(As, 4), 4);
        cp.value = SpherePoint::infinity();
        cp.value_chart_inverted = true;
    }
    cp.c2 = t[2];
    cp.c3 = t[3];
    cp.c4 = t[4];
    cp.simple = std::abs(cp.c2) >= tol;
    return cp;
}

bool value_less(const SpherePoint& a, const SpherePoint& b) {
    if (a.is_inf() || b.is_inf()) return b.is_inf() && !a.is_inf();
    if (a.value().real() != b.value().real()) return a.value().real() < b.value().real();
    return a.value().imag() < b.value().imag();
}

CriticalData critical_data_impl(const RationalMap& map, double tol, bool lenient) {
    const Poly& p = map.num();
    const Poly& q = map.den();
    const Poly r = (p.derivative() * q - p * q.derivative()).trimmed();
    const int expected = 2 * map.degree() - 2;

    CriticalData data;
    for (const cplx& w_k : r.roots()) {
        CriticalPoint cp;
        if (std::abs(w_k) <= 1.0) {
            cp = taylor_at(p, q, w_k, false, tol);
            cp.point = SpherePoint(w_k);
        } else {
            Poly ns, ds;
            map.inverted_chart(ns, ds);
            cp = taylor_at(ns, ds, 1.0 / w_k, true, tol);
            cp.point = SpherePoint(w_k);
        }
        data.points.push_back(cp);
    }

    // Ramification at infinity accounts for the shortfall of finite roots.
    const int mult_inf = expected - r.degree();
    if (mult_inf > 0) {
        Poly ns, ds;
        map.inverted_chart(ns, ds);
        CriticalPoint cp = taylor_at(ns, ds, cplx(0.0), true, tol);
        cp.point = SpherePoint::infinity();
        // One entry per sheet of extra ramification so the multiplicity
        // count stays honest; only the first carries simple=true.
        cp.simple = cp.simple && mult_inf == 1;
        for (int i = 0; i < mult_inf; ++i) {
            data.points.push_back(cp);
            cp.simple = false;
        }
    }
    data.count_with_multiplicity = static_cast<int>(data.points.size());
    if (data.count_with_multiplicity != expected)
        throw RootFindingFailure("Riemann-Hurwitz count mismatch");

    if (!lenient)
        for (const CriticalPoint& cp : data.points)
            if (!cp.simple) throw DegenerateCritical("|c2| below tolerance at a critical point");

    std::sort(data.points.begin(), data.points.end(),
              [](const CriticalPoint& a, const CriticalPoint& b) {
                  if (!(a.value == b.value)) return value_less(a.value, b.value);
                  return value_less(a.point, b.point);
              });
    return data;
}

} // namespace

CriticalData critical_data(const RationalMap& map, double tol) {
    return critical_data_impl(map, tol, false);
}

CriticalData critical_data_lenient(const RationalMap& map, double tol) {
    return critical_data_impl(map, tol, true);
}

ValidationReport validate(const RationalMap& map, const CriticalData& data) {
    ValidationReport rep;
    rep.solver_admissible = true;
    for (const CriticalPoint& cp : data.points)
        if (!cp.simple) {
            rep.solver_admissible = false;
            rep.notes.push_back("non-simple critical point");
            break;
        }

    bool finite_values = true, distinct_values = true;
    for (size_t i = 0; i < data.points.size(); ++i) {
        if (data.points[i].value.is_inf()) finite_values = false;
        for (size_t j = i + 1; j < data.points.size(); ++j)
            if (chordal_distance(data.points[i].value, data.points[j].value) <= 1e-8)
                distinct_values = false;
    }
    if (!finite_values) rep.notes.push_back("critical value at infinity");
    if (!distinct_values) rep.notes.push_back("coinciding critical values");

    bool poles_ok = true;
    try {
        const std::vector<cplx> qroots = map.den().roots(1e-8);
        for (size_t i = 0; i < qroots.size() && poles_ok; ++i)
            for (size_t j = i + 1; j < qroots.size(); ++j)
                if (std::abs(qroots[i] - qroots[j]) <= 1e-8) poles_ok = false;
        if (map.num().degree() > map.den().degree() + 1) poles_ok = false;
    } catch (const RootFindingFailure&) {
        poles_ok = false;
    }
    if (!poles_ok) rep.notes.push_back("non-simple pole");

    rep.paper_standard =
        rep.solver_admissible && finite_values && distinct_values && poles_ok;
    return rep;
}

RationalMap rotate_target(const RationalMap& map, const TargetRotation& rot) {
    const Poly num = map.num().scaled(rot.a) + map.den().scaled(rot.b);
    const Poly den =
        map.num().scaled(-std::conj(rot.b)) + map.den().scaled(std::conj(rot.a));
    return RationalMap(num, den);
}

} // namespace speclab
