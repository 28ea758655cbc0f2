#ifndef SPECLAB_LOCAL_FRAME_HPP
#define SPECLAB_LOCAL_FRAME_HPP

#include "speclab/power_series.hpp"
#include "speclab/rational_map.hpp"

namespace speclab {

// Local frame at a simple critical point: the distinguished parameter
// x = sqrt(z - z_k), the chart change w(x), its Schwarzian at 0 (the Schiffer
// projective connection value at genus 0), and the endpoint coefficients of
// the variational formula.
struct FrameData {
    int k = -1;
    cplx sqrt_c2;          // chosen branch, principal argument
    PowerSeries w_of_x{6}; // w - w_k as a series in x (chart of the point)
    cplx schiffer;         // S_Sch(x)|_0 = {w, x}(0)
    cplx b0;               // -schiffer / 6
    cplx binf;             // (1/2) conj(z_k)/(1+|z_k|^2); invalid if z_k = inf
    bool binf_valid = false;

    cplx binf_checked() const {
        if (!binf_valid) throw InfiniteCriticalValue("b(-infinity) needs finite z_k");
        return binf;
    }
};

FrameData schiffer_at_critical(const RationalMap& map, const CriticalData& data,
                               int k);

// (b0 - binf)/2 = -(1/12) S_Sch(x_k)|_0 - (1/4) conj(z_k)/(1+|z_k|^2);
// both routes evaluated and cross-checked to 1e-12.
cplx variational_rhs(const RationalMap& map, const CriticalData& data, int k);
cplx variational_rhs(const FrameData& frame, const SpherePoint& z_k);

} // namespace speclab

#endif
