#ifndef SPECLAB_SPECTRAL_HPP
#define SPECLAB_SPECTRAL_HPP

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "speclab/local_frame.hpp"
#include "speclab/rational_map.hpp"
#include "speclab/sph_basis.hpp"

namespace speclab {

// Conformal weight mu(w) = |f'(w)|^2 (1+|w|^2)^2 / (1+|f(w)|^2)^2, the ratio
// of the pulled-back metric to the round metric on the cover sphere.
// Evaluated through whichever source/target chart pair stays bounded, so
// poles and the point at infinity cost nothing.
class WeightField {
public:
    static WeightField for_map(const RationalMap& map);
    // Synthetic weight for tests; `degree` fixes the nominal area 4*pi*N.
    static WeightField custom(std::function<double(const SpherePoint&)> fn,
                              int degree);

    double weight(const SpherePoint& w) const;
    const RationalMap* map() const { return map_ ? &*map_ : nullptr; }
    int degree() const { return degree_; }

private:
    WeightField() = default;
    std::optional<RationalMap> map_;
    Poly inv_num_, inv_den_; // f(1/s) chart pair
    std::function<double(const SpherePoint&)> fn_;
    int degree_ = 0;
};

// Galerkin discretization in the real harmonic basis: the stiffness is
// exactly diagonal (conformal invariance of the Dirichlet energy), all
// approximation error sits in the weighted mass matrix.
struct GalerkinSystem {
    Eigen::VectorXd K; // diag entries l(l+1)
    Eigen::MatrixXd M; // mass, M_ij = int Y_i Y_j mu dA
};

GalerkinSystem assemble(const WeightField& wf, int L, int oversample = 2);

struct Spectrum {
    int L = 0;
    double group_tol = 1e-5;
    int requested_J = 0;
    Eigen::VectorXd values;  // ascending, all (L+1)^2 Galerkin eigenvalues
    Eigen::MatrixXd vectors; // columns, M-orthonormal
    std::vector<int> group_id;
    int reliable_count = 0; // lowest third of the computed spectrum
    bool convergence_warning = false;

    std::vector<double> values_upto(int J) const; // first J+1 entries
    std::vector<int> group_members(int gid) const;
};

// Solve K v = lambda M v by Cholesky reduction; returns the full ascending
// spectrum with lambda_0 = 0 included.  Throws QuadratureUnderflow when the
// mass matrix fails the Cholesky positivity check.
Spectrum solve(const WeightField& wf, int L, int J, double group_tol = 1e-5,
               int oversample = 2);

// Pointwise evaluation of eigenfunction j (value, d/dw, d/dwbar).  The
// derivative is analytic in the basis, no finite differences; w must be
// finite for the public deriv, the chart flip handles |w| > 1.
double eigenfunction_value(const Spectrum& spec, int j, const SpherePoint& w);
cplx eigenfunction_deriv(const Spectrum& spec, const WeightField& wf, int j, cplx w);
cplx eigenfunction_deriv_conj(const Spectrum& spec, int j, cplx w);

// Expansion data of eigenfunctions at cone k in the distinguished parameter:
// Phi_j = c_j + a_j xbar + b_j x + O(|x|^{2-eps}),  b_j = (d_w Phi_j)/sqrt(c2).
struct ConeCoeffs {
    int cone = -1;
    std::vector<cplx> c, b, a;
    std::vector<int> group_id;
    double max_conj_violation = 0.0; // max |a_j - conj(b_j)| over reliable modes
};

ConeCoeffs cone_coeffs(const Spectrum& spec, const WeightField& wf,
                       const CriticalData& data, const FrameData& frame, int k);

// Flip coefficients under w -> 1/w (the sphere rotation (x,y,z)->(x,-y,-z)).
Eigen::VectorXd flip_chart_coeffs(const Eigen::VectorXd& v, int L);

} // namespace speclab

#endif
