#include "speclab/sph_basis.hpp"

#include <cmath>

namespace speclab {

void legendre_table(int L, double t, double s, std::vector<double>& P) {
    P.assign(lm_index(L, L) + 1, 0.0);
    P[lm_index(0, 0)] = 1.0 / std::sqrt(4.0 * M_PI);
    for (int m = 1; m <= L; ++m)
        P[lm_index(m, m)] =
            s * std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * P[lm_index(m - 1, m - 1)];
    for (int m = 0; m < L; ++m)
        P[lm_index(m + 1, m)] = t * std::sqrt(2.0 * m + 3.0) * P[lm_index(m, m)];
    for (int m = 0; m <= L; ++m)
        for (int l = m + 2; l <= L; ++l) {
            const double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
            const double b = std::sqrt((double(l - 1) * (l - 1) - double(m) * m) /
                                       (4.0 * double(l - 1) * (l - 1) - 1.0));
            P[lm_index(l, m)] =
                a * (t * P[lm_index(l - 1, m)] - b * P[lm_index(l - 2, m)]);
        }
}

void legendre_dtheta_table(int L, const std::vector<double>& P,
                           std::vector<double>& dP) {
    dP.assign(P.size(), 0.0);
    auto get = [&](int l, int m) -> double {
        return (m >= 0 && m <= l) ? P[lm_index(l, m)] : 0.0;
    };
    for (int l = 1; l <= L; ++l) {
        dP[lm_index(l, 0)] = -std::sqrt(double(l) * (l + 1)) * get(l, 1);
        for (int m = 1; m <= l; ++m)
            dP[lm_index(l, m)] =
                0.5 * (std::sqrt(double(l + m) * (l - m + 1)) * get(l, m - 1) -
                       std::sqrt(double(l - m) * (l + m + 1)) * get(l, m + 1));
    }
}

void legendre_m_over_sin_table(int L, const std::vector<double>& P,
                               std::vector<double>& V) {
    V.assign(P.size(), 0.0);
    auto get = [&](int l, int m) -> double {
        return (m >= 0 && m <= l) ? P[lm_index(l, m)] : 0.0;
    };
    for (int l = 1; l <= L; ++l) {
        const double pref = 0.5 * std::sqrt((2.0 * l + 1.0) / (2.0 * l - 1.0));
        for (int m = 1; m <= l; ++m)
            V[lm_index(l, m)] =
                pref * (std::sqrt(double(l - m) * (l - m - 1)) * get(l - 1, m + 1) +
                        std::sqrt(double(l + m) * (l + m - 1)) * get(l - 1, m - 1));
    }
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // Legendre P_n(x) and derivative by recurrence.
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

SphGrid make_grid(int ntheta, int nphi) {
    SphGrid g;
    gauss_legendre(ntheta, g.t, g.wt);
    g.nphi = nphi;
    return g;
}

SphGrid grid_for_degree(int L, int oversample) {
    return make_grid(oversample * (2 * L + 2), oversample * (4 * L + 2));
}

SpherePoint chart_point(double t, double phi) {
    const double r = std::sqrt(std::max(0.0, (1.0 - t) / (1.0 + t)));
    return SpherePoint(std::polar(r, phi));
}

void basis_row(int L, double t, double s, double phi, std::vector<double>& row) {
    std::vector<double> P;
    legendre_table(L, t, s, P);
    row.assign(sh_count(L), 0.0);
    const double sq2 = std::sqrt(2.0);
    for (int l = 0; l <= L; ++l) {
        row[sh_index(l, 0)] = P[lm_index(l, 0)];
        for (int m = 1; m <= l; ++m) {
            const double p = sq2 * P[lm_index(l, m)];
            row[sh_index(l, m)] = p * std::cos(m * phi);
            row[sh_index(l, -m)] = p * std::sin(m * phi);
        }
    }
}

} // namespace speclab
