#include "speclab/perturbation.hpp"

#include <algorithm>
#include <cmath>

namespace speclab {

ModelParams ModelParams::from_lambda(cplx lambda) {
    ModelParams p;
    p.nu = -0.5 + std::sqrt(cplx(0.25) + lambda);
    return p;
}

void ModelParams::check() const {
    const cplx c = std::cos(nu * M_PI);
    const double scale = std::cosh(nu.imag() * M_PI);
    if (std::abs(c) < 1e-8 * scale)
        throw HalfIntegerNu("cos(nu pi) vanishes; model solution has a pole");
}

cplx legendre_Y(double r, double psi, const ModelParams& params) {
    params.check();
    if (r <= 0.0 || r >= M_PI) throw Error("legendre_Y: r must be in (0, pi)");
    const double g = 1.0 / std::tan(0.5 * r); // |w|^2 = cot(r/2)
    const cplx w = std::polar(std::sqrt(g), psi);
    const cplx cn = std::cos(params.nu * M_PI);
    return (std::cos(params.nu * r) + g * std::sin(params.nu * r)) / (w * cn);
}

ModelSolution legendre_Y_chart(cplx v, const ModelParams& params) {
    params.check();
    const double g = std::norm(v);
    if (g <= 0.0) throw Error("legendre_Y_chart: cone point");
    const double r = 2.0 * std::atan(1.0 / g); // cot(r/2) = g
    const cplx cn = std::cos(params.nu * M_PI);
    const cplx A = std::cos(params.nu * r) / cn;
    const cplx B = std::sin(params.nu * r) / cn;
    const double dr_dg = -2.0 / (1.0 + g * g);
    const cplx dA = -params.nu * B * dr_dg; // dA/dg
    const cplx dB = params.nu * A * dr_dg;
    ModelSolution out;
    const cplx vbar = std::conj(v);
    out.value = A / v + B * vbar;
    // d/dv: g depends on v through dg/dv = vbar.
    out.dv = -A / (v * v) + (dA / v + dB * vbar) * vbar;
    out.dvbar = (dA / v + dB * vbar) * v + B;
    return out;
}

ModelBA model_b_a(const ModelParams& params) {
    params.check();
    ModelBA out;
    out.b = 0.0;
    out.a = (1.0 + 2.0 * params.nu) * std::tan(params.nu * M_PI);
    out.c = 0.0;
    return out;
}

cplx q_pairing(const ExpansionCoeffs& u, const ExpansionCoeffs& v) {
    // v's coefficients are named (c_{-1}, d_{-1}, c_0, d_0, c_1, d_1)
    // positionally: c ~ a, d ~ b.
    const cplx cm1 = v.am1, dm1 = v.bm1, c0 = v.a0c, d0 = v.b0c, c1 = v.a1,
               d1 = v.b1;
    return 4.0 * M_PI *
           (-u.am1 * std::conj(d1) - u.bm1 * std::conj(c1) -
            u.b0c * std::conj(c0) / 2.0 + u.a0c * std::conj(d0) / 2.0 +
            u.b1 * std::conj(cm1) + u.a1 * std::conj(dm1));
}

AnnulusFit fit_expansion(const std::function<cplx(cplx)>& f, double r_lo,
                         double r_hi, int n_r, int n_ang) {
    const int rows = n_r * n_ang;
    const int cols = 11;
    Eigen::MatrixXcd A(rows, cols);
    Eigen::VectorXcd y(rows);
    int row = 0;
    for (int i = 0; i < n_r; ++i) {
        const double r =
            r_lo * std::pow(r_hi / r_lo, n_r == 1 ? 0.0 : double(i) / (n_r - 1));
        for (int j = 0; j < n_ang; ++j) {
            const cplx x = std::polar(r, 2.0 * M_PI * (j + 0.31) / n_ang);
            const cplx xb = std::conj(x);
            y[row] = f(x);
            A(row, 0) = 1.0 / xb;
            A(row, 1) = 1.0 / x;
            A(row, 2) = std::log(std::abs(x));
            A(row, 3) = 1.0;
            A(row, 4) = xb;
            A(row, 5) = x;
            A(row, 6) = xb * xb;
            A(row, 7) = x * xb;
            A(row, 8) = x * x;
            A(row, 9) = x * xb * xb;
            A(row, 10) = x * x * xb;
            ++row;
        }
    }
    Eigen::VectorXd scale(cols);
    for (int c = 0; c < cols; ++c) {
        scale[c] = A.col(c).norm();
        A.col(c) /= scale[c];
    }
    const Eigen::VectorXcd sol = A.colPivHouseholderQr().solve(y);
    AnnulusFit out;
    out.residual = (A * sol - y).norm() / std::max(1e-300, y.norm());
    Eigen::VectorXcd coef = sol;
    for (int c = 0; c < cols; ++c) coef[c] /= scale[c];
    out.coeffs.am1 = coef[0];
    out.coeffs.bm1 = coef[1];
    out.coeffs.a0c = coef[2];
    out.coeffs.b0c = coef[3];
    out.coeffs.a1 = coef[4];
    out.coeffs.b1 = coef[5];
    return out;
}

std::pair<cplx, cplx> group_derivative_prediction(const ConeCoeffs& coeffs,
                                                  const std::vector<int>& group) {
    if (group.empty()) throw IncompleteGroup("empty group");
    const int gid = coeffs.group_id[group.front()];
    std::vector<int> expect;
    for (size_t j = 0; j < coeffs.group_id.size(); ++j)
        if (coeffs.group_id[j] == gid) expect.push_back((int)j);
    std::vector<int> sorted = group;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != expect)
        throw IncompleteGroup("indices do not exhaust the multiplicity cluster");
    cplx A = 0.0;
    for (int j : group) A += coeffs.b[j] * coeffs.b[j];
    A *= 2.0 * M_PI;
    return {A, std::conj(A)};
}

namespace {

// Quintic cutoff in q = (g - g_lo)/(g_hi - g_lo): 1 below, 0 above, C^2.
struct Cutoff {
    double g_lo, g_hi;
    double sigma(double g) const {
        if (g <= g_lo) return 1.0;
        if (g >= g_hi) return 0.0;
        const double q = (g - g_lo) / (g_hi - g_lo);
        return 1.0 - q * q * q * (10.0 - 15.0 * q + 6.0 * q * q);
    }
    double dsigma(double g) const {
        if (g <= g_lo || g >= g_hi) return 0.0;
        const double d = g_hi - g_lo;
        const double q = (g - g_lo) / d;
        return -30.0 * q * q * (1.0 - 2.0 * q + q * q) / d;
    }
    double d2sigma(double g) const {
        if (g <= g_lo || g >= g_hi) return 0.0;
        const double d = g_hi - g_lo;
        const double q = (g - g_lo) / d;
        return -(60.0 * q - 180.0 * q * q + 120.0 * q * q * q) / (d * d);
    }
};

} // namespace

BLambdaResult b_lambda_degree2(const RationalMap& map, const CriticalData& data,
                               int k, double lambda, int L, int oversample) {
    if (lambda >= 0.0) throw Error("b_lambda_degree2: lambda must be negative");
    const CriticalPoint& cp = data.points[k];
    if (cp.value.is_inf() || cp.point.is_inf() || cp.point_chart_inverted)
        throw InfiniteCriticalValue("b(lambda) needs a finite cone with finite value");
    const cplx zk = cp.value.value();
    const cplx wk = cp.point.value();
    const FrameData frame = schiffer_at_critical(map, data, k);
    const double one_pz2 = 1.0 + std::norm(zk);
    const double snorm = 1.0 / std::sqrt(one_pz2);
    const ModelParams params = ModelParams::from_lambda(lambda);
    const Cutoff cut{0.08, 0.30};

    // Branch of what = sqrt(S(F(w))), anchored so that what ~ x/sqrt(1+|zk|^2)
    // matches the distinguished parameter near the cone.
    const cplx gref = frame.sqrt_c2 / std::sqrt(one_pz2);
    const cplx Gref = gref * gref;
    auto S_of = [&](cplx z) { return (z - zk) / (1.0 + std::conj(zk) * z); };
    auto Sprime = [&](cplx z) {
        const cplx d = 1.0 + std::conj(zk) * z;
        return one_pz2 / (d * d);
    };
    auto what_at = [&](cplx w, cplx zeta) {
        const cplx u = w - wk;
        const cplx R = zeta / (u * u) / Gref;
        if (std::abs(std::arg(R)) > 0.9 * M_PI)
            throw TrackingLost("cutoff support too wide for a single sqrt branch");
        return gref * std::sqrt(R) * u;
    };

    // Grid pass: commutator data on the transition annulus.
    const SphGrid grid = grid_for_degree(L, oversample);
    struct Node {
        cplx w;
        double wt;
        cplx hmu;     // [Delta*, rho] Yhat  times mu
        cplx rho_yhat;
        double t, s, phi;
    };
    std::vector<Node> nodes;
    for (int i = 0; i < grid.ntheta(); ++i)
        for (int j = 0; j < grid.nphi; ++j) {
            const SpherePoint wp = chart_point(grid.t[i], grid.phi(j));
            const cplx w = wp.value();
            SpherePoint fv, fd;
            map.evaluate(wp, fv, fd);
            if (fv.is_inf()) continue; // |S| = 1/|zk| there; outside by config
            const cplx zeta = S_of(fv.value());
            const double g = std::abs(zeta);
            if (g >= cut.g_hi) continue;
            if (cut.dsigma(g) == 0.0 && cut.sigma(g) == 1.0) continue;
            if (fd.is_inf())
                throw TrackingLost("pole inside the cutoff transition annulus");
            // df/dw in the affine chart (grid points with |w|>1 still carry a
            // finite affine derivative away from poles).
            cplx fprime = fd.value();
            if (!wp.is_inf() && std::abs(wp.value()) > 1.0) {
                // evaluate() reported d(f o inv)/ds; convert by ds/dw = -1/w^2.
                // It already converted; fd is df/dw. Nothing to do.
            }
            const cplx vhat = what_at(w, zeta);
            const ModelSolution ms = legendre_Y_chart(vhat, params);
            const cplx zeta_p = Sprime(fv.value()) * fprime;
            const cplx whp = zeta_p / (2.0 * vhat); // d what / dw
            const cplx Yhat = snorm * ms.value;
            const cplx dY = snorm * ms.dv * whp;
            const cplx dYb = snorm * ms.dvbar * std::conj(whp);
            // rho = sigma(|zeta|): d|zeta|/dw = zeta' conj(zeta)/(2|zeta|).
            const cplx dg_dw = zeta_p * std::conj(zeta) / (2.0 * g);
            const cplx drho = cut.dsigma(g) * dg_dw;
            const double ddg = std::norm(zeta_p) / (4.0 * g); // d2|zeta|/dwdwbar
            const cplx ddrho = cut.d2sigma(g) * dg_dw * std::conj(dg_dw) +
                               cut.dsigma(g) * ddg;
            const double one_pw2 = 1.0 + std::norm(w);
            Node nd;
            nd.w = w;
            nd.wt = grid.wt[i] * grid.phi_weight();
            nd.hmu = -(one_pw2 * one_pw2) *
                     (drho * dYb + std::conj(drho) * dY + ddrho * Yhat);
            nd.rho_yhat = cut.sigma(g) * Yhat;
            nd.t = grid.t[i];
            nd.s = std::sqrt(std::max(0.0, 1.0 - grid.t[i] * grid.t[i]));
            nd.phi = grid.phi(j);
            nodes.push_back(nd);
        }
    if (nodes.size() < 32)
        throw TrackingLost("transition annulus badly resolved by the grid");

    // rhs_i = (h, Y_i) and the resolvent correction y = -(K - lambda M)^{-1} rhs.
    const WeightField wf = WeightField::for_map(map);
    GalerkinSystem sys = assemble(wf, L, oversample);
    const int nb = sh_count(L);
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(nb);
    std::vector<std::vector<double>> rows(nodes.size());
    for (size_t n = 0; n < nodes.size(); ++n) {
        // Basis rows expect the |w| <= 1 chart; flip when needed.
        const cplx w = nodes[n].w;
        if (std::abs(w) <= 1.0) {
            basis_row(L, nodes[n].t, nodes[n].s, nodes[n].phi, rows[n]);
        } else {
            const cplx s = 1.0 / w;
            const double r2 = std::norm(s);
            std::vector<double> raw;
            basis_row(L, (1.0 - r2) / (1.0 + r2), 2.0 * std::abs(s) / (1.0 + r2),
                      std::arg(s), raw);
            // Y_i(w) = sign * Y_i(1/w) with the flip parities.
            rows[n].assign(nb, 0.0);
            for (int l = 0; l <= L; ++l)
                for (int m = -l; m <= l; ++m) {
                    const int am = std::abs(m);
                    double sign = ((l + am) % 2 == 0) ? 1.0 : -1.0;
                    if (m < 0) sign = -sign;
                    rows[n][sh_index(l, m)] = sign * raw[sh_index(l, m)];
                }
        }
        for (int i = 0; i < nb; ++i)
            rhs[i] += nodes[n].wt * nodes[n].hmu * rows[n][i];
    }
    Eigen::MatrixXd Alam = (-lambda) * sys.M;
    for (int i = 0; i < nb; ++i) Alam(i, i) += sys.K[i];
    Eigen::LLT<Eigen::MatrixXd> llt(Alam);
    if (llt.info() != Eigen::Success)
        throw QuadratureUnderflow("K - lambda M not positive definite");
    const Eigen::VectorXd cr = llt.solve(-rhs.real());
    const Eigen::VectorXd ci = llt.solve(-rhs.imag());

    BLambdaResult res;
    res.binf = 0.5 * std::conj(zk) / one_pz2;
    res.correction_norm =
        std::sqrt(cr.dot(sys.M * cr) + ci.dot(sys.M * ci));

    // Pairing identity: b = binf - (1/4pi) \int h (rho Yhat + y) dVol.
    cplx pair_int = 0.0;
    for (size_t n = 0; n < nodes.size(); ++n) {
        double yr = 0.0, yi = 0.0;
        for (int i = 0; i < nb; ++i) {
            yr += cr[i] * rows[n][i];
            yi += ci[i] * rows[n][i];
        }
        pair_int += nodes[n].wt * nodes[n].hmu * (nodes[n].rho_yhat + cplx(yr, yi));
    }
    res.b_pairing = res.binf - pair_int / (4.0 * M_PI);

    // Annulus least-squares extraction of the x-coefficient of Y.
    auto w_of_x = [&](cplx x) {
        cplx u = 0.0;
        cplx p = 1.0;
        for (int n = 1; n <= frame.w_of_x.order(); ++n) {
            p *= x;
            u += frame.w_of_x[n] * p;
        }
        cplx w = wk + u;
        const cplx z = zk + x * x;
        for (int it = 0; it < 3; ++it) { // Newton polish on F(w) = z
            SpherePoint fv, fd;
            map.evaluate(SpherePoint(w), fv, fd);
            if (fv.is_inf() || fd.is_inf()) break;
            const cplx num = fv.value() - z;
            if (std::abs(fd.value()) < 1e-300) break;
            w -= num / fd.value();
        }
        return w;
    };
    auto Y_at_x = [&](cplx x) {
        const cplx w = w_of_x(x);
        // vhat directly from x: vhat = x / sqrt(1+|zk|^2 + conj(zk) x^2).
        const cplx vhat = x / std::sqrt(cplx(one_pz2) + std::conj(zk) * x * x);
        const cplx yh = snorm * legendre_Y_chart(vhat, params).value;
        double yr = 0.0, yi = 0.0;
        if (std::abs(w) <= 1.0) {
            std::vector<double> row;
            const double r2 = std::norm(w);
            basis_row(L, (1.0 - r2) / (1.0 + r2), 2.0 * std::abs(w) / (1.0 + r2),
                      std::arg(w), row);
            for (int i = 0; i < nb; ++i) {
                yr += cr[i] * row[i];
                yi += ci[i] * row[i];
            }
        } else {
            const cplx s = 1.0 / w;
            const double r2 = std::norm(s);
            std::vector<double> raw;
            basis_row(L, (1.0 - r2) / (1.0 + r2), 2.0 * std::abs(s) / (1.0 + r2),
                      std::arg(s), raw);
            for (int l = 0; l <= L; ++l)
                for (int m = -l; m <= l; ++m) {
                    const int am = std::abs(m);
                    double sign = ((l + am) % 2 == 0) ? 1.0 : -1.0;
                    if (m < 0) sign = -sign;
                    const int i = sh_index(l, m);
                    yr += cr[i] * sign * raw[i];
                    yi += ci[i] * sign * raw[i];
                }
        }
        return yh + cplx(yr, yi);
    };
    const AnnulusFit fit = fit_expansion(Y_at_x, 1e-3, 1e-2);
    res.b_ls = fit.coeffs.b1;
    return res;
}

} // namespace speclab
