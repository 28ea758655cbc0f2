#include "speclab/tau.hpp"

#include <algorithm>
#include <cmath>

namespace speclab {

namespace {

// 8-point Gauss-Legendre on [0,1].
constexpr int kGaussN = 8;
constexpr double kGx[kGaussN] = {0.01985507175123188, 0.10166676129318664,
                                 0.2372337950418355,  0.40828267875217505,
                                 0.5917173212478249,  0.7627662049581645,
                                 0.8983332387068134,  0.9801449282487681};
constexpr double kGw[kGaussN] = {0.05061426814518813, 0.11119051722668723,
                                 0.15685332293894363, 0.18134189168918097,
                                 0.18134189168918097, 0.15685332293894363,
                                 0.11119051722668723, 0.05061426814518813};

// Match the entries of `cur` to the ordering of `prev` by nearest neighbor.
std::vector<int> track_order(const std::vector<cplx>& prev,
                             const std::vector<cplx>& cur, double margin) {
    const size_t n = prev.size();
    if (cur.size() != n) throw TrackingLost("critical value count changed");
    std::vector<int> pick(n, -1);
    std::vector<bool> used(n, false);
    for (size_t i = 0; i < n; ++i) {
        double best = 1e300, second = 1e300;
        int arg = -1;
        for (size_t j = 0; j < n; ++j) {
            if (used[j]) continue;
            const double d =
                chordal_distance(SpherePoint(prev[i]), SpherePoint(cur[j]));
            if (d < best) {
                second = best;
                best = d;
                arg = (int)j;
            } else if (d < second) {
                second = d;
            }
        }
        if (arg < 0 || (second < 2.0 * best && best > 0.25 * margin))
            throw TrackingLost("ambiguous nearest-neighbor match");
        pick[i] = arg;
        used[arg] = true;
    }
    return pick;
}

void check_collisions(const std::vector<cplx>& z, double margin) {
    for (size_t i = 0; i < z.size(); ++i)
        for (size_t j = i + 1; j < z.size(); ++j)
            if (chordal_distance(SpherePoint(z[i]), SpherePoint(z[j])) < margin)
                throw CollisionDetected("critical values within the margin");
}

struct PathState {
    std::vector<cplx> z_ref; // ordering reference, updated along the path
    bool initialized = false;
};

// Integrand 2 Re sum_k omega_k zdot_k at parameter t, with tracking.
double integrand(const ModuliPath& path, double t, PathState& st,
                 std::vector<TauSample>* ledger) {
    const RationalMap m = path.map_at(t);
    const CriticalData data = critical_data(m);
    std::vector<cplx> z, pts;
    for (const CriticalPoint& cp : data.points) {
        if (cp.value.is_inf())
            throw InfiniteCriticalValue("tau one-form needs finite critical values");
        z.push_back(cp.value.value());
        pts.push_back(cp.point.is_inf() ? cplx(0.0) : cp.point.value());
    }
    check_collisions(z, path.collision_margin);

    std::vector<int> order(z.size());
    if (!st.initialized) {
        for (size_t i = 0; i < z.size(); ++i) order[i] = (int)i;
        st.z_ref = z;
        st.initialized = true;
    } else {
        order = track_order(st.z_ref, z, path.collision_margin);
        for (size_t i = 0; i < z.size(); ++i) st.z_ref[i] = z[order[i]];
    }

    // zdot_k = d/dt f_t(w_k): central difference of the moving map at the
    // frozen critical point (f'(w_k) = 0 kills the w_k motion term).
    const double dt = 1e-6;
    const double tp = std::min(1.0, t + dt), tm = std::max(0.0, t - dt);
    const RationalMap mp = path.map_at(tp);
    const RationalMap mm = path.map_at(tm);

    double acc = 0.0;
    TauSample sample;
    sample.t = t;
    for (size_t i = 0; i < z.size(); ++i) {
        const int k = order[i];
        const FrameData fr = schiffer_at_critical(m, data, k);
        const cplx omega = -fr.schiffer / 12.0;
        const SpherePoint wk = data.points[k].point;
        const cplx zp = mp(wk).value();
        const cplx zm = mm(wk).value();
        const cplx zdot = (zp - zm) / (tp - tm);
        acc += 2.0 * std::real(omega * zdot);
        sample.z.push_back(z[k]);
        sample.omega.push_back(omega);
    }
    if (ledger) ledger->push_back(sample);
    return acc;
}

double integrate_panels(const ModuliPath& path, int panels) {
    PathState st;
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double a = double(p) / panels, b = double(p + 1) / panels;
        for (int g = 0; g < kGaussN; ++g) {
            const double t = a + (b - a) * kGx[g];
            acc += (b - a) * kGw[g] * integrand(path, t, st, nullptr);
        }
    }
    return acc;
}

} // namespace

RationalMap ModuliPath::map_at(double t) const {
    t = std::clamp(t, 0.0, 1.0);
    if (const auto* d2 = std::get_if<Degree2Nodes>(&family)) {
        const auto& nodes = d2->nodes;
        if (nodes.size() < 2) throw ConfigError("path needs at least two nodes");
        const double x = t * (nodes.size() - 1);
        const int i = std::min<int>((int)x, nodes.size() - 2);
        const double u = x - i;
        const cplx z1 = nodes[i].first + u * (nodes[i + 1].first - nodes[i].first);
        const cplx z2 = nodes[i].second + u * (nodes[i + 1].second - nodes[i].second);
        return RationalMap::degree2_family(z1, z2);
    }
    const auto& nodes = std::get<CoeffCurveNodes>(family).nodes;
    if (nodes.size() < 2) throw ConfigError("path needs at least two nodes");
    const double x = t * (nodes.size() - 1);
    const int i = std::min<int>((int)x, nodes.size() - 2);
    const double u = x - i;
    const RationalMap &A = nodes[i], &B = nodes[i + 1];
    if (A.num().degree() != B.num().degree() || A.den().degree() != B.den().degree())
        throw ConfigError("coefficient curve nodes must share degrees");
    return RationalMap(A.num().scaled(1.0 - u) + B.num().scaled(u),
                       A.den().scaled(1.0 - u) + B.den().scaled(u));
}

std::vector<cplx> one_form(const RationalMap& map) {
    const CriticalData data = critical_data(map);
    std::vector<cplx> out;
    for (int k = 0; k < (int)data.points.size(); ++k) {
        if (data.points[k].value.is_inf())
            throw InfiniteCriticalValue("tau one-form needs finite critical values");
        out.push_back(-schiffer_at_critical(map, data, k).schiffer / 12.0);
    }
    return out;
}

double tau2_n2(cplx z1, cplx z2) {
    if (std::abs(z1 - z2) < 1e-14)
        throw CoincidentValues("tau2_n2: z1 = z2");
    return 0.5 * std::log(std::abs(z1 - z2));
}

TauResult integrate_log_tau2(const ModuliPath& path) {
    TauResult res;
    int panels = std::max(2, path.samples);
    double prev = integrate_panels(path, panels);
    double cur = prev;
    for (int ref = 0; ref < 6; ++ref) {
        panels *= 2;
        cur = integrate_panels(path, panels);
        res.quadrature_error = std::abs(cur - prev);
        prev = cur;
        if (res.quadrature_error < 1e-8 * (1.0 + std::abs(cur))) break;
    }
    res.delta_log_tau2 = cur;
    res.panels_used = panels;
    // Modest fixed sampling for the per-sample ledger.
    PathState st;
    const int nl = 33;
    for (int i = 0; i < nl; ++i)
        (void)integrand(path, double(i) / (nl - 1), st, &res.ledger);
    return res;
}

TauResult rhs_teorema_delta(const ModuliPath& path) {
    TauResult res = integrate_log_tau2(path);
    double sum0 = 0.0, sum1 = 0.0;
    for (const cplx& z : res.ledger.front().z) sum0 += std::log(1.0 + std::norm(z));
    for (const cplx& z : res.ledger.back().z) sum1 += std::log(1.0 + std::norm(z));
    res.rhs_delta = res.delta_log_tau2 - 0.25 * (sum1 - sum0);
    return res;
}

} // namespace speclab
