#ifndef SPECLAB_TAU_HPP
#define SPECLAB_TAU_HPP

#include <variant>
#include <vector>

#include "speclab/local_frame.hpp"
#include "speclab/rational_map.hpp"

namespace speclab {

// Discretized curve of rational maps.  Nodes are interpolated linearly,
// either in the (z1, z2) parameters of the degree-2 family or coefficientwise
// for explicit maps of matching degrees.
struct Degree2Nodes {
    std::vector<std::pair<cplx, cplx>> nodes;
};
struct CoeffCurveNodes {
    std::vector<RationalMap> nodes;
};

struct ModuliPath {
    std::variant<Degree2Nodes, CoeffCurveNodes> family;
    int samples = 32;              // initial panels; refined adaptively
    double collision_margin = 0.05; // chordal separation of critical values

    RationalMap map_at(double t) const;
};

struct TauSample {
    double t;
    std::vector<cplx> z;     // tracked critical values
    std::vector<cplx> omega; // tau one-form components
};

struct TauResult {
    double delta_log_tau2 = 0.0; // change of log |tau|^2 along the path
    double rhs_delta = 0.0;      // change of the g=0 determinant-formula RHS
    int panels_used = 0;
    double quadrature_error = 0.0;
    std::vector<TauSample> ledger;
};

// Component k is -(1/12) S_Sch(x_k)|_0, ordered like critical_data.
std::vector<cplx> one_form(const RationalMap& map);

// log|tau|^2 = (1/2) log|z1 - z2| for the N=2 family.
double tau2_n2(cplx z1, cplx z2);

// Path integral of d log|tau|^2 = 2 Re sum_k omega_k dz_k with continuous
// tracking of the critical values; adaptive panel doubling to 1e-8.
TauResult integrate_log_tau2(const ModuliPath& path);

// delta log|tau|^2 - (1/4) sum_k Delta log(1+|z_k|^2): the change of the
// logarithm of the determinant-formula right-hand side, constant cancelling.
TauResult rhs_teorema_delta(const ModuliPath& path);

} // namespace speclab

#endif
