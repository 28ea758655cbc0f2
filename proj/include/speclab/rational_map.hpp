#ifndef SPECLAB_RATIONAL_MAP_HPP
#define SPECLAB_RATIONAL_MAP_HPP

#include <string>
#include <vector>

#include "speclab/poly.hpp"

namespace speclab {

// Rotation of the target sphere, z -> (a z + b) / (-conj(b) z + conj(a))
// with |a|^2 + |b|^2 = 1.
struct TargetRotation {
    cplx a, b;
    TargetRotation(cplx a_, cplx b_);
    SpherePoint apply(const SpherePoint& z) const;
    TargetRotation compose(const TargetRotation& first) const; // this after first
};

// Degree-N rational self-map of the sphere, the covering map f = p/q.
// Normalized so the denominator is monic; p and q must be coprime.
class RationalMap {
public:
    RationalMap(Poly numerator, Poly denominator);

    // The degree-2 family F[z1,z2](w) = (z1+z2)/2 + ((z2-z1)/4)(w + 1/w),
    // with critical points at w = -1, +1 and critical values exactly z1, z2.
    static RationalMap degree2_family(cplx z1, cplx z2);

    const Poly& num() const { return p_; }
    const Poly& den() const { return q_; }
    int degree() const { return N_; }

    // Value and affine-chart derivative df/dw, evaluated in the chart where
    // |w| (resp. |f|) stays bounded; infinity is a legal point and value.
    void evaluate(const SpherePoint& w, SpherePoint& f, SpherePoint& fprime) const;
    SpherePoint operator()(const SpherePoint& w) const;

    // f(1/s) as a numerator/denominator pair (the 1/w source chart).
    void inverted_chart(Poly& num_s, Poly& den_s) const;

    bool coefficients_close(const RationalMap& other, double tol) const;

private:
    Poly p_, q_;
    int N_;
};

struct CriticalPoint {
    SpherePoint point;   // w_k
    SpherePoint value;   // z_k
    bool point_chart_inverted = false; // Taylor data lives in s = 1/w
    bool value_chart_inverted = false; // Taylor data is of 1/f (z_k = infinity)
    cplx c2, c3, c4;     // f(w) - z_k = c2 u^2 + c3 u^3 + c4 u^4 + ... in the chart
    bool simple = false;
};

struct CriticalData {
    std::vector<CriticalPoint> points; // sorted by critical value
    int count_with_multiplicity = 0;   // must equal 2N - 2
};

struct ValidationReport {
    bool solver_admissible = false; // all critical points simple
    bool paper_standard = false;    // additionally: finite, pairwise distinct
                                    // critical values; simple non-critical poles
    std::vector<std::string> notes;
};

// Extract critical points/values and local Taylor data c2..c4.  Throws
// DegenerateCritical when |c2| < tol at some critical point, and
// RootFindingFailure when root polishing stalls.
CriticalData critical_data(const RationalMap& map, double tol = 1e-8);

// Like critical_data but returning degenerate points with simple=false
// instead of throwing; used by validate().
CriticalData critical_data_lenient(const RationalMap& map, double tol = 1e-8);

ValidationReport validate(const RationalMap& map, const CriticalData& data);

// rot o f as a normalized RationalMap; critical points unchanged, critical
// values transformed by rot.
RationalMap rotate_target(const RationalMap& map, const TargetRotation& rot);

} // namespace speclab

#endif
