#include "speclab/spectral.hpp"

#include <cmath>

namespace speclab {

WeightField WeightField::for_map(const RationalMap& map) {
    WeightField wf;
    wf.map_ = map;
    map.inverted_chart(wf.inv_num_, wf.inv_den_);
    wf.degree_ = map.degree();
    return wf;
}

WeightField WeightField::custom(std::function<double(const SpherePoint&)> fn,
                                int degree) {
    WeightField wf;
    wf.fn_ = std::move(fn);
    wf.degree_ = degree;
    return wf;
}

double WeightField::weight(const SpherePoint& w) const {
    if (fn_) return fn_(w);
    // Pick the source chart keeping the coordinate bounded.
    const bool invert = w.is_inf() || std::abs(w.value()) > 1.0;
    const cplx x = w.is_inf() ? cplx(0.0) : (invert ? 1.0 / w.value() : w.value());
    const Poly& A = invert ? inv_num_ : map_->num();
    const Poly& B = invert ? inv_den_ : map_->den();
    cplx n, dn, d, dd;
    A.eval_with_deriv(x, n, dn);
    B.eval_with_deriv(x, d, dd);
    // Spherical derivative |g'| (1+|x|^2) / (1+|g|^2) is chart-covariant;
    // flip the target chart (g -> 1/g) whenever |g| would exceed 1.
    const double one_px2 = 1.0 + std::norm(x);
    double fsharp;
    if (std::abs(n) <= std::abs(d)) {
        const cplx g = n / d;
        const cplx dg = (dn * d - n * dd) / (d * d);
        fsharp = std::abs(dg) * one_px2 / (1.0 + std::norm(g));
    } else {
        const cplx g = d / n;
        const cplx dg = (dd * n - d * dn) / (n * n);
        fsharp = std::abs(dg) * one_px2 / (1.0 + std::norm(g));
    }
    return fsharp * fsharp;
}

GalerkinSystem assemble(const WeightField& wf, int L, int oversample) {
    if (L < 2) throw Error("assemble: L must be >= 2");
    const SphGrid grid = grid_for_degree(L, oversample);
    const int nth = grid.ntheta();
    const int nph = grid.nphi;
    const int nb = sh_count(L);
    const int kmax = 2 * L;

    // Azimuthal Fourier data of mu per theta row, and Legendre tables.
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(nth, kmax + 1);
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(nth, kmax + 1);
    std::vector<Eigen::MatrixXd> Pm(L + 1); // Pm[m]: nth x (L+1-m)
    for (int m = 0; m <= L; ++m) Pm[m].resize(nth, L + 1 - m);

    std::vector<double> ptab;
    std::vector<double> mu_row(nph);
    for (int i = 0; i < nth; ++i) {
        const double t = grid.t[i];
        const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
        for (int j = 0; j < nph; ++j)
            mu_row[j] = wf.weight(chart_point(t, grid.phi(j)));
        const double wphi = grid.phi_weight();
        for (int k = 0; k <= kmax; ++k) {
            double ck = 0.0, sk = 0.0;
            for (int j = 0; j < nph; ++j) {
                const double a = k * grid.phi(j);
                ck += mu_row[j] * std::cos(a);
                sk += mu_row[j] * std::sin(a);
            }
            C(i, k) = wphi * ck;
            S(i, k) = wphi * sk;
        }
        legendre_table(L, t, s, ptab);
        for (int m = 0; m <= L; ++m)
            for (int l = m; l <= L; ++l) Pm[m](i, l - m) = ptab[lm_index(l, m)];
    }

    GalerkinSystem sys;
    sys.K.resize(nb);
    for (int l = 0; l <= L; ++l)
        for (int m = -l; m <= l; ++m) sys.K[sh_index(l, m)] = double(l) * (l + 1);

    sys.M = Eigen::MatrixXd::Zero(nb, nb);
    Eigen::VectorXd wvec(nth);
    auto scatter = [&](int ma, int mb, const Eigen::MatrixXd& G) {
        for (int l = std::abs(ma); l <= L; ++l)
            for (int lp = std::abs(mb); lp <= L; ++lp) {
                sys.M(sh_index(l, ma), sh_index(lp, mb)) =
                    G(l - std::abs(ma), lp - std::abs(mb));
                sys.M(sh_index(lp, mb), sh_index(l, ma)) =
                    G(l - std::abs(ma), lp - std::abs(mb));
            }
    };
    // F(m,m') carries the phi integral of trig_m trig_{m'} mu, including the
    // sqrt(2) normalizations of the real basis.
    for (int a = 0; a <= L; ++a) {
        for (int b = 0; b <= a; ++b) {
            const int kd = a - b, ks = a + b;
            // (+a, +b): cos cos
            for (int i = 0; i < nth; ++i) {
                double F;
                if (a == 0 && b == 0) F = C(i, 0);
                else if (b == 0) F = std::sqrt(2.0) * C(i, a);
                else F = C(i, kd) + C(i, ks);
                wvec[i] = grid.wt[i] * F;
            }
            scatter(a, b, Pm[a].transpose() * wvec.asDiagonal() * Pm[b]);
            // (-a, -b): sin sin
            if (a >= 1 && b >= 1) {
                for (int i = 0; i < nth; ++i)
                    wvec[i] = grid.wt[i] * (C(i, kd) - C(i, ks));
                scatter(-a, -b, Pm[a].transpose() * wvec.asDiagonal() * Pm[b]);
            }
            // (-a, +b): sin(a phi) cos(b phi)
            if (a >= 1) {
                for (int i = 0; i < nth; ++i) {
                    double F;
                    if (b == 0) F = std::sqrt(2.0) * S(i, a);
                    else F = S(i, ks) + S(i, kd);
                    wvec[i] = grid.wt[i] * F;
                }
                scatter(-a, b, Pm[a].transpose() * wvec.asDiagonal() * Pm[b]);
            }
            // (+a, -b): cos(a phi) sin(b phi)
            if (b >= 1) {
                for (int i = 0; i < nth; ++i)
                    wvec[i] = grid.wt[i] * (S(i, ks) - S(i, kd));
                scatter(a, -b, Pm[a].transpose() * wvec.asDiagonal() * Pm[b]);
            }
        }
    }
    return sys;
}

std::vector<double> Spectrum::values_upto(int J) const {
    std::vector<double> out;
    for (int j = 0; j <= J && j < values.size(); ++j) out.push_back(values[j]);
    return out;
}

std::vector<int> Spectrum::group_members(int gid) const {
    std::vector<int> out;
    for (size_t j = 0; j < group_id.size(); ++j)
        if (group_id[j] == gid) out.push_back(static_cast<int>(j));
    return out;
}

namespace {

// Parity of Y_{l,m} under the sphere isometry w -> 1/w.
double flip_sign(int l, int m) {
    const int am = std::abs(m);
    double sign = ((l + am) % 2 == 0) ? 1.0 : -1.0;
    return m < 0 ? -sign : sign;
}

// When the weight is invariant under w -> 1/w the mass matrix commutes with
// the diagonal parity; the two parity blocks solve independently at a
// quarter of the dense cost.  Exactness of the split is checked, not
// assumed.
bool try_flip_split(const GalerkinSystem& sys, int L, Eigen::VectorXd& values,
                    Eigen::MatrixXd& vectors) {
    const int nb = sh_count(L);
    std::vector<int> plus, minus;
    for (int l = 0; l <= L; ++l)
        for (int m = -l; m <= l; ++m)
            (flip_sign(l, m) > 0 ? plus : minus).push_back(sh_index(l, m));
    const double scale = sys.M.cwiseAbs().maxCoeff();
    double offblock = 0.0;
    for (int i : plus)
        for (int j : minus) offblock = std::max(offblock, std::abs(sys.M(i, j)));
    if (offblock > 1e-12 * scale) return false;

    values.resize(nb);
    vectors = Eigen::MatrixXd::Zero(nb, nb);
    std::vector<std::pair<double, int>> order;
    int col = 0;
    for (const std::vector<int>* idx : {&plus, &minus}) {
        const int n = static_cast<int>(idx->size());
        Eigen::MatrixXd Mb(n, n), Kb = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            Kb(i, i) = sys.K[(*idx)[i]];
            for (int j = 0; j < n; ++j) Mb(i, j) = sys.M((*idx)[i], (*idx)[j]);
        }
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Kb, Mb);
        if (es.info() != Eigen::Success) return false;
        for (int k = 0; k < n; ++k) {
            order.emplace_back(es.eigenvalues()[k], col);
            for (int i = 0; i < n; ++i)
                vectors((*idx)[i], col) = es.eigenvectors()(i, k);
            ++col;
        }
    }
    std::sort(order.begin(), order.end());
    Eigen::MatrixXd sorted(nb, nb);
    for (int k = 0; k < nb; ++k) {
        values[k] = order[k].first;
        sorted.col(k) = vectors.col(order[k].second);
    }
    vectors = std::move(sorted);
    return true;
}

} // namespace

Spectrum solve(const WeightField& wf, int L, int J, double group_tol,
               int oversample) {
    const int nb = sh_count(L);
    if (J > nb - 1) throw Error("solve: J exceeds basis size");
    GalerkinSystem sys = assemble(wf, L, oversample);
    Eigen::LLT<Eigen::MatrixXd> llt(sys.M);
    if (llt.info() != Eigen::Success)
        throw QuadratureUnderflow("mass matrix failed Cholesky positivity");

    Spectrum spec;
    spec.L = L;
    if (!try_flip_split(sys, L, spec.values, spec.vectors)) {
        const Eigen::MatrixXd Kd = sys.K.asDiagonal();
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Kd, sys.M);
        if (es.info() != Eigen::Success) throw Error("solve: eigensolver failed");
        spec.values = es.eigenvalues();
        spec.vectors = es.eigenvectors();
    }
    spec.group_tol = group_tol;
    spec.requested_J = J;
    spec.reliable_count = nb / 3;
    spec.convergence_warning =
        J >= 1 && spec.values[std::min(J, nb - 1)] >=
                      0.95 * spec.values[std::max(0, spec.reliable_count - 1)];

    spec.group_id.assign(nb, 0);
    int gid = 0;
    for (int j = 1; j < nb; ++j) {
        if (spec.values[j] - spec.values[j - 1] > group_tol * (1.0 + spec.values[j]))
            ++gid;
        spec.group_id[j] = gid;
    }
    return spec;
}

Eigen::VectorXd flip_chart_coeffs(const Eigen::VectorXd& v, int L) {
    Eigen::VectorXd out(v.size());
    for (int l = 0; l <= L; ++l)
        for (int m = -l; m <= l; ++m) {
            // under w -> 1/w: theta -> pi - theta, phi -> -phi
            const int am = std::abs(m);
            double sign = ((l + am) % 2 == 0) ? 1.0 : -1.0;
            if (m < 0) sign = -sign;
            out[sh_index(l, m)] = sign * v[sh_index(l, m)];
        }
    return out;
}

namespace {

struct ChartAngles {
    double t, s, phi;
};

ChartAngles angles_from_chart(cplx w) {
    const double r2 = std::norm(w);
    ChartAngles a;
    a.t = (1.0 - r2) / (1.0 + r2);
    a.s = 2.0 * std::abs(w) / (1.0 + r2);
    a.phi = std::arg(w == cplx(0.0) ? cplx(1.0) : w);
    return a;
}

double value_in_chart(const Eigen::VectorXd& v, int L, cplx w) {
    const ChartAngles a = angles_from_chart(w);
    std::vector<double> row;
    basis_row(L, a.t, a.s, a.phi, row);
    double acc = 0.0;
    for (int i = 0; i < (int)row.size(); ++i) acc += v[i] * row[i];
    return acc;
}

// d/dw of the coefficient sum at a chart point with |w| <= 1.
// For w != 0:  dPhi = e^{-i phi} cos^2(theta/2) [ d_theta Phi - (i/sin) d_phi Phi ].
// At w = 0 only the m = +-1 harmonics contribute:
//   dPhi(0) = sqrt(2) sum_l c_l (v_{l,1} - i v_{l,-1}),
//   c_l = (1/2) sqrt(l(l+1)(2l+1)/(4 pi)).
cplx deriv_in_chart(const Eigen::VectorXd& v, int L, cplx w, bool conj_deriv) {
    if (std::abs(w) < 1e-9) {
        cplx acc = 0.0;
        for (int l = 1; l <= L; ++l) {
            const double cl =
                0.5 * std::sqrt(double(l) * (l + 1) * (2 * l + 1) / (4.0 * M_PI));
            const cplx unit = conj_deriv ? cplx(0.0, 1.0) : cplx(0.0, -1.0);
            acc += std::sqrt(2.0) * cl *
                   (v[sh_index(l, 1)] + unit * v[sh_index(l, -1)]);
        }
        return acc;
    }
    const ChartAngles a = angles_from_chart(w);
    std::vector<double> P, dP, V;
    legendre_table(L, a.t, a.s, P);
    legendre_dtheta_table(L, P, dP);
    legendre_m_over_sin_table(L, P, V);
    const double sq2 = std::sqrt(2.0);
    double dth = 0.0;   // d_theta Phi
    double dph_s = 0.0; // (1/sin theta) d_phi Phi
    for (int l = 0; l <= L; ++l) {
        dth += v[sh_index(l, 0)] * dP[lm_index(l, 0)];
        for (int m = 1; m <= l; ++m) {
            const double cm = std::cos(m * a.phi), sm = std::sin(m * a.phi);
            dth += sq2 * dP[lm_index(l, m)] *
                   (v[sh_index(l, m)] * cm + v[sh_index(l, -m)] * sm);
            dph_s += sq2 * V[lm_index(l, m)] *
                     (-v[sh_index(l, m)] * sm + v[sh_index(l, -m)] * cm);
        }
    }
    const double cos2_half = 0.5 * (1.0 + a.t);
    const cplx phase = std::polar(cos2_half, conj_deriv ? a.phi : -a.phi);
    const cplx unit = conj_deriv ? cplx(0.0, 1.0) : cplx(0.0, -1.0);
    return phase * (dth + unit * dph_s);
}

} // namespace

double eigenfunction_value(const Spectrum& spec, int j, const SpherePoint& w) {
    if (!w.is_inf() && std::abs(w.value()) <= 1.0)
        return value_in_chart(spec.vectors.col(j), spec.L, w.value());
    const Eigen::VectorXd flipped = flip_chart_coeffs(spec.vectors.col(j), spec.L);
    const cplx s = w.is_inf() ? cplx(0.0) : 1.0 / w.value();
    return value_in_chart(flipped, spec.L, s);
}

cplx eigenfunction_deriv(const Spectrum& spec, const WeightField& wf, int j, cplx w) {
    (void)wf;
    if (std::abs(w) <= 1.0) return deriv_in_chart(spec.vectors.col(j), spec.L, w, false);
    const Eigen::VectorXd flipped = flip_chart_coeffs(spec.vectors.col(j), spec.L);
    const cplx s = 1.0 / w;
    return deriv_in_chart(flipped, spec.L, s, false) * (-s * s);
}

cplx eigenfunction_deriv_conj(const Spectrum& spec, int j, cplx w) {
    if (std::abs(w) <= 1.0) return deriv_in_chart(spec.vectors.col(j), spec.L, w, true);
    const Eigen::VectorXd flipped = flip_chart_coeffs(spec.vectors.col(j), spec.L);
    const cplx s = 1.0 / w;
    return deriv_in_chart(flipped, spec.L, s, true) * std::conj(-s * s);
}

ConeCoeffs cone_coeffs(const Spectrum& spec, const WeightField& wf,
                       const CriticalData& data, const FrameData& frame, int k) {
    const CriticalPoint& cp = data.points[k];
    ConeCoeffs cc;
    cc.cone = k;
    cc.group_id = spec.group_id;
    const int n = static_cast<int>(spec.values.size());
    cc.c.resize(n);
    cc.b.resize(n);
    cc.a.resize(n);

    // In the inverted chart the Taylor data (and sqrt_c2) already refer to
    // s = 1/w, so the raw d/ds derivative pairs with it directly.
    const bool inv = cp.point_chart_inverted;
    const cplx xk = inv ? (cp.point.is_inf() ? cplx(0.0) : 1.0 / cp.point.value())
                        : cp.point.value();
    for (int j = 0; j < n; ++j) {
        const Eigen::VectorXd col =
            inv ? flip_chart_coeffs(spec.vectors.col(j), spec.L)
                : Eigen::VectorXd(spec.vectors.col(j));
        cc.c[j] = value_in_chart(col, spec.L, xk);
        const cplx d = deriv_in_chart(col, spec.L, xk, false);
        const cplx dbar = deriv_in_chart(col, spec.L, xk, true);
        cc.b[j] = d / frame.sqrt_c2;
        cc.a[j] = dbar / std::conj(frame.sqrt_c2);
    }
    for (int j = 0; j < spec.reliable_count; ++j)
        cc.max_conj_violation =
            std::max(cc.max_conj_violation, std::abs(cc.a[j] - std::conj(cc.b[j])));
    (void)wf;
    return cc;
}

} // namespace speclab
