#include "speclab/zeta_det.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace speclab {

namespace {
constexpr double kEulerGamma = 0.57721566490153286060;
constexpr double kZetaPrimeMinus1 = -0.16542114370045092921; // zeta_R'(-1)
constexpr double kZeroModeTol = 1e-8;

double expint_e1(double x) {
    // E1(x) = -Ei(-x); underflows to 0 for large arguments.
    if (x > 700.0) return 0.0;
    return -std::expint(-x);
}
} // namespace

double EvList::min_positive(double tol) const {
    for (size_t i = 0; i < lam.size(); ++i)
        if (lam[i] > tol) return lam[i];
    throw Error("EvList: no positive eigenvalue");
}

EvList EvList::from_values(const std::vector<double>& values) {
    EvList ev;
    for (double v : values) ev.push(v);
    return ev;
}

WeylTail fit_weyl_tail(const EvList& ev, int reliable_count) {
    // Linear fit lambda ~ slope*j + offset over the top tenth of the
    // reliable range, with j counting eigenvalues (multiplicity expanded).
    std::vector<double> flat;
    for (size_t i = 0; i < ev.lam.size(); ++i)
        for (int r = 0; r < (int)std::lround(ev.mult[i]); ++r) flat.push_back(ev.lam[i]);
    const int n = reliable_count > 0 ? std::min<int>(reliable_count, flat.size())
                                     : (int)flat.size();
    const int lo = std::max(0, n - std::max(10, n / 10));
    if (n - lo < 2) throw Error("fit_weyl_tail: too few eigenvalues");
    double sj = 0, sl = 0, sjj = 0, sjl = 0;
    for (int j = lo; j < n; ++j) {
        sj += j;
        sl += flat[j];
        sjj += double(j) * j;
        sjl += double(j) * flat[j];
    }
    const double m = n - lo;
    WeylTail tail;
    tail.slope = (m * sjl - sj * sl) / (m * sjj - sj * sj);
    tail.offset = (sl - tail.slope * sj) / m;
    tail.valid = tail.slope > 0.0;
    return tail;
}

double heat_trace(const EvList& ev, const WeylTail& tail, double t,
                  bool subtract_zero_mode) {
    if (t <= 0.0) throw Error("heat_trace: t must be positive");
    if (ev.max_lambda() > 0.0 && t < 2.0 / ev.max_lambda())
        throw TailUnreliable("t below 2/lambda_J; truncation dominates");
    double acc = 0.0;
    for (size_t i = 0; i < ev.lam.size(); ++i)
        acc += ev.mult[i] * std::exp(-ev.lam[i] * t);
    if (tail.valid) {
        // Euler-Maclaurin: sum over j > J of exp(-lambda_j t) with density
        // 1/slope, boundary half-weight at the last included eigenvalue.
        const double e = std::exp(-ev.max_lambda() * t);
        acc += e / (tail.slope * t) - 0.5 * e;
    }
    return subtract_zero_mode ? acc - 1.0 : acc;
}

HeatModel fit_heat_coeffs(const EvList& ev, double t_lo, double t_hi,
                          bool with_log_probe, int n_grid, const WeylTail* tail,
                          std::optional<double> pin_cm1) {
    const double lam1 = ev.min_positive(kZeroModeTol);
    if (t_lo < 2.0 / ev.max_lambda() || t_hi > 1.0 / lam1)
        throw TailUnreliable("fit window outside [2/lambda_J, 1/lambda_1]");
    WeylTail wt = tail ? *tail : fit_weyl_tail(ev);

    // Fit t * trace(t) on a log-spaced grid; equivalent to fitting the trace
    // in {1/t, t^{-1/2}, 1, sqrt t, t (, log t)} but with uniformly scaled
    // residuals.  Guard powers t^2, t^{5/2}, t^3 absorb the tail of the
    // asymptotic series so the leading coefficients stay sharp; they carry
    // a 1/T-amplified weight in the zeta assembly otherwise.
    const std::vector<double> guard_alphas = {2.0, 2.5, 3.0};
    const bool pinned = pin_cm1.has_value();
    const int nbase = pinned ? 4 : 5;
    const int ncol = nbase + (int)guard_alphas.size() + (with_log_probe ? 1 : 0);
    const int logcol = ncol - 1;
    Eigen::MatrixXd A(n_grid, ncol);
    Eigen::VectorXd y(n_grid);
    for (int i = 0; i < n_grid; ++i) {
        const double t =
            t_lo * std::pow(t_hi / t_lo, n_grid == 1 ? 0.0 : double(i) / (n_grid - 1));
        const double tr = heat_trace(ev, wt, t, false);
        y[i] = t * tr - (pinned ? *pin_cm1 : 0.0);
        int c = 0;
        if (!pinned) A(i, c++) = 1.0;
        A(i, c++) = std::sqrt(t);
        A(i, c++) = t;
        A(i, c++) = t * std::sqrt(t);
        A(i, c++) = t * t;
        for (double g : guard_alphas) A(i, c++) = t * std::pow(t, g);
        if (with_log_probe) A(i, logcol) = t * std::log(t);
    }
    // Column scaling keeps the conditioning test meaningful.
    Eigen::VectorXd scale(ncol);
    for (int c = 0; c < ncol; ++c) scale[c] = A.col(c).norm();
    for (int c = 0; c < ncol; ++c) A.col(c) /= scale[c];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double cond =
        svd.singularValues()[0] / svd.singularValues()[ncol - 1];
    if (cond > 1e10)
        throw IllConditionedFit("design matrix condition exceeds 1e10");
    Eigen::VectorXd coef = svd.solve(y);
    Eigen::VectorXd resid = y - A * coef;
    for (int c = 0; c < ncol; ++c) coef[c] /= scale[c];

    HeatModel m;
    int c = 0;
    m.c_m1 = pinned ? *pin_cm1 : coef[c++];
    m.c_mhalf = coef[c++];
    m.c_0 = coef[c++];
    m.c_half = coef[c++];
    m.c_1 = coef[c++];
    for (double g : guard_alphas) m.extras.emplace_back(g, coef[c++]);
    m.log_probed = with_log_probe;
    m.log_coeff = with_log_probe ? coef[logcol] : 0.0;
    m.condition = cond;
    m.fit_residual = resid.norm() / std::max(1e-300, y.norm());
    m.tail = wt;
    return m;
}

double log_det_single(const EvList& ev, const HeatModel& model, double T) {
    if (T < 2.0 / ev.max_lambda())
        throw TailUnreliable("split point below 2/lambda_J");
    // zeta'(0) = gamma (c0 - 1) + (c0 - 1) ln T
    //          - c_m1 / T - 2 c_mhalf T^{-1/2} + 2 c_half T^{1/2} + c_1 T
    //          + int_T^inf (Tr - 1) dt / t.
    const double c0m1 = model.c_0 - 1.0;
    double zp = kEulerGamma * c0m1 + c0m1 * std::log(T);
    zp += -model.c_m1 / T - 2.0 * model.c_mhalf / std::sqrt(T) +
          2.0 * model.c_half * std::sqrt(T) + model.c_1 * T;
    for (const auto& [alpha, c] : model.extras) zp += c * std::pow(T, alpha) / alpha;
    double tail_int = 0.0;
    for (size_t i = 0; i < ev.lam.size(); ++i)
        if (ev.lam[i] > kZeroModeTol) tail_int += ev.mult[i] * expint_e1(ev.lam[i] * T);
    if (model.tail.valid) {
        const double x = ev.max_lambda() * T;
        // E1 integrated over the Weyl density, with the same half-weight
        // boundary correction as heat_trace.
        tail_int += (std::exp(-x) - x * expint_e1(x)) / (model.tail.slope * T) -
                    0.5 * expint_e1(x);
    }
    zp += tail_int;
    return -zp;
}

double richardson3(const std::vector<double>& Ls, const std::vector<double>& ys,
                   double* rate) {
    if (Ls.size() != 3 || ys.size() != 3) throw Error("richardson3: need 3 points");
    const double d1 = ys[0] - ys[1], d2 = ys[1] - ys[2];
    if (rate) *rate = 0.0;
    if (d2 == 0.0 || d1 * d2 <= 0.0 || std::abs(d2) >= std::abs(d1))
        return ys[2]; // not in the asymptotic regime; take the finest value
    const double r = d1 / d2;
    auto ratio = [&](double p) {
        return (std::pow(Ls[0], -p) - std::pow(Ls[1], -p)) /
               (std::pow(Ls[1], -p) - std::pow(Ls[2], -p));
    };
    double lo = 0.05, hi = 24.0;
    if ((ratio(lo) - r) * (ratio(hi) - r) > 0.0) return ys[2];
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((ratio(lo) - r) * (ratio(mid) - r) <= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    const double p = 0.5 * (lo + hi);
    if (rate) *rate = p;
    const double q = std::pow(Ls[2], -p) / (std::pow(Ls[1], -p) - std::pow(Ls[2], -p));
    return ys[2] - d2 * q;
}

DetResult log_det(const std::vector<std::pair<int, EvList>>& family,
                  double t_lo, double t_hi, double T) {
    if (family.empty()) throw Error("log_det: empty family");
    DetResult res;
    res.T = T;
    std::vector<double> Ls, vals, vals2T;
    for (const auto& [L, ev] : family) {
        const HeatModel m = fit_heat_coeffs(ev, t_lo, t_hi, true);
        const double v = log_det_single(ev, m, T);
        res.L_table.emplace_back(L, v);
        Ls.push_back(L);
        vals.push_back(v);
        vals2T.push_back(log_det_single(ev, m, 2.0 * T));
        res.J = (int)ev.lam.size();
    }
    double ld, ld2;
    if (family.size() == 3) {
        ld = richardson3(Ls, vals);
        ld2 = richardson3(Ls, vals2T);
        res.extrap_spread = std::abs(ld - vals.back());
    } else {
        ld = vals.back();
        ld2 = vals2T.back();
        res.extrap_spread = family.size() > 1
                                ? std::abs(vals.back() - vals[vals.size() - 2])
                                : 0.0;
    }
    res.logdet = ld;
    res.split_spread = std::abs(ld2 - ld);
    res.uncertainty = std::max(res.split_spread, res.extrap_spread);
    return res;
}

ExtrapolatedList reliable_extrapolated_evlist(const std::vector<Spectrum>& family,
                                              double eta) {
    if (family.size() < 2) throw Error("need at least two spectra");
    for (size_t i = 1; i < family.size(); ++i)
        if (family[i].L <= family[i - 1].L)
            throw Error("spectra must be ordered by increasing L");
    const int jmax = static_cast<int>(family.front().values.size()) / 2;
    ExtrapolatedList out;
    double prev = -1.0;
    for (int j = 0; j < jmax; ++j) {
        double ex, corr;
        if (family.size() >= 3) {
            const size_t n = family.size();
            std::vector<double> Ls = {double(family[n - 3].L), double(family[n - 2].L),
                                      double(family[n - 1].L)};
            std::vector<double> ys = {family[n - 3].values[j], family[n - 2].values[j],
                                      family[n - 1].values[j]};
            ex = richardson3(Ls, ys);
            corr = std::abs(ex - ys[2]);
        } else {
            ex = family.back().values[j];
            corr = std::abs(ex - family.front().values[j]);
        }
        const double rel = corr / std::max(std::abs(ex), 0.5);
        // allow cluster-level reordering noise in the monotonicity guard
        if (j > 0 && (rel > eta || ex < prev - 1e-6 * (1.0 + std::abs(prev)))) break;
        out.ev.push(ex);
        out.max_rel_correction = std::max(out.max_rel_correction, rel);
        prev = ex;
        out.accepted = j + 1;
    }
    if (out.accepted < 8) throw TailUnreliable("too few reliable eigenvalues");
    return out;
}

namespace {

WeylTail tail_for(const EvList& ev, std::optional<int> degree) {
    if (!degree) return fit_weyl_tail(ev);
    // Exact Weyl slope 4 pi / Area = 1/N; only the offset is fitted.
    WeylTail tail;
    tail.slope = 1.0 / double(*degree);
    const int n = static_cast<int>(ev.lam.size());
    const int lo = std::max(0, n - std::max(10, n / 10));
    double acc = 0.0;
    for (int j = lo; j < n; ++j) acc += ev.lam[j] - tail.slope * j;
    tail.offset = acc / std::max(1, n - lo);
    tail.valid = true;
    return tail;
}

double assemble_logdet(const EvList& ev, const ZetaOptions& opt, double T) {
    const WeylTail tail = tail_for(ev, opt.degree);
    const double lam1 = ev.min_positive();
    const double t_hi = std::min(opt.t_hi, 0.9 / lam1);
    double t_lo = opt.window_factor / ev.max_lambda();
    t_lo = std::min(t_lo, t_hi / 4.0);
    const std::optional<double> pin =
        opt.degree ? std::optional<double>(double(*opt.degree)) : std::nullopt;
    const HeatModel m = fit_heat_coeffs(ev, t_lo, t_hi, false, 80, &tail, pin);
    return log_det_single(ev, m, T);
}

} // namespace

DetResult log_det_from_spectra(const std::vector<Spectrum>& family,
                               const ZetaOptions& opt) {
    const ExtrapolatedList full = reliable_extrapolated_evlist(family, opt.eta);
    const ExtrapolatedList tight = reliable_extrapolated_evlist(family, 0.5 * opt.eta);
    DetResult res;
    res.T = opt.T;
    res.J = full.accepted;
    res.logdet = assemble_logdet(full.ev, opt, opt.T);
    res.split_spread = std::abs(assemble_logdet(full.ev, opt, 2.0 * opt.T) - res.logdet);
    // Per-L diagnostic: the same truncation and fit applied to the raw
    // eigenvalues of each family member.
    for (const Spectrum& s : family) {
        EvList raw;
        for (int j = 0; j < full.accepted; ++j) raw.push(s.values[j]);
        res.L_table.emplace_back(s.L, assemble_logdet(raw, opt, opt.T));
    }
    // L-extrapolation spread: distance of the extrapolated assembly from the
    // finest raw one, sharpened by the eta-sensitivity of the truncation.
    const double eta_sens = std::abs(assemble_logdet(tight.ev, opt, opt.T) - res.logdet);
    res.extrap_spread =
        std::max(eta_sens, 0.5 * std::abs(res.logdet - res.L_table.back().second));
    res.uncertainty = std::max(res.split_spread, res.extrap_spread);
    return res;
}

EvList football_spectrum(double nu_max) {
    if (nu_max < 1.0) throw Error("football_spectrum: nu_max must be >= 1");
    EvList ev;
    for (int k = 0; k <= (int)std::floor(2.0 * nu_max + 1e-9); ++k) {
        const double nu = 0.5 * k;
        ev.push(nu * (nu + 1.0), 2.0 * nu + 1.0);
    }
    return ev;
}

double football_zeta_series(double s) {
    // zeta(s) = 4^s sum_{i>=0} binom(s+i-1, i) (zeta_R(2s+2i-1) - 1).  Each
    // term continues meromorphically; the only genuine pole is s = 1 (i=0).
    // At s = 1-i (i >= 1) the binomial zero cancels the zeta_R pole and the
    // term takes the limit value (-1)^{i-1} / (2i).
    double acc = 0.0;
    double coef = 1.0; // binom(s+i-1, i)
    for (int i = 0; i < 64; ++i) {
        if (i > 0) coef *= (s + i - 1.0) / i;
        const double arg = 2.0 * s + 2.0 * i - 1.0;
        double term;
        if (std::abs(arg - 1.0) < 1e-12) {
            if (i == 0) throw Error("football_zeta_series: pole at s=1");
            term = (i % 2 == 1 ? 1.0 : -1.0) / (2.0 * i);
        } else {
            term = coef * (std::riemann_zeta(arg) - 1.0);
        }
        acc += term;
        if (i > 4 && std::abs(term) < 1e-17 * (1.0 + std::abs(acc))) break;
    }
    return std::pow(4.0, s) * acc;
}

double football_logdet_oracle(int precision_digits) {
    if (precision_digits > 12)
        throw Error("football_logdet_oracle: precision capped at 12 digits");
    // zeta(0) = -7/12 (the i=0 term gives zeta_R(-1) - 1, the i=1 term the
    // residue limit 1/2).  zeta'(0) assembles from
    //   log4 * zeta(0) + 2 zeta_R'(-1) + (gamma - 1)
    //   + sum_{i>=2} (zeta_R(2i-1) - 1)/i.
    const double zeta0 = -7.0 / 12.0;
    double tail = 0.0;
    const double eps = 0.1 * std::pow(10.0, -precision_digits);
    for (int i = 2; i < 64; ++i) {
        const double term = (std::riemann_zeta(2.0 * i - 1.0) - 1.0) / i;
        tail += term;
        if (term < eps * 0.5) break; // terms decay by ~1/4 per step
    }
    const double zp0 = std::log(4.0) * zeta0 + 2.0 * kZetaPrimeMinus1 +
                       (kEulerGamma - 1.0) + tail;
    return -zp0;
}

} // namespace speclab
