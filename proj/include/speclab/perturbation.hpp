#ifndef SPECLAB_PERTURBATION_HPP
#define SPECLAB_PERTURBATION_HPP

#include <vector>

#include "speclab/spectral.hpp"

namespace speclab {

// Separation-of-variables data for the model cone (football) problem with
// lambda = nu (nu + 1).
struct ModelParams {
    cplx nu;
    static ModelParams from_lambda(cplx lambda);
    void check() const; // HalfIntegerNu when cos(nu pi) ~ 0
};

// Closed-form solution Y = (1/w)(cos(nu r) + sin(nu r) |w|^2)/cos(nu pi)
// with |w|^2 = cot(r/2), arg w = psi; grows like 1/x at the cone r = pi.
cplx legendre_Y(double r, double psi, const ModelParams& params);

// The same solution as a function of the cover coordinate, with analytic
// d/dv and d/dvbar.
struct ModelSolution {
    cplx value;
    cplx dv;
    cplx dvbar;
};
ModelSolution legendre_Y_chart(cplx v, const ModelParams& params);

// Case-1 closed forms: b = 0, a = (1+2 nu) tan(nu pi), c = 0.
struct ModelBA {
    cplx b, a, c;
};
ModelBA model_b_a(const ModelParams& params);

// Coefficients of the distributional expansion
//   u = a_{-1} xbar^{-1} + b_{-1} x^{-1} + a_0 ln|x| + b_0 + a_1 xbar + b_1 x.
struct ExpansionCoeffs {
    cplx am1, bm1, a0c, b0c, a1, b1;
};

// q[u,v] = 4 pi ( -a_{-1} conj(d_1) - b_{-1} conj(c_1) - b_0 conj(c_0)/2
//                 + a_0 conj(d_0)/2 + b_1 conj(c_{-1}) + a_1 conj(d_{-1}) ).
cplx q_pairing(const ExpansionCoeffs& u, const ExpansionCoeffs& v);

// Least-squares extraction of the expansion coefficients from samples of a
// function of x on an annulus r_lo <= |x| <= r_hi; quadratic/cubic guard
// columns absorb the start of the remainder.
struct AnnulusFit {
    ExpansionCoeffs coeffs;
    double residual = 0.0;
};
AnnulusFit fit_expansion(const std::function<cplx(cplx)>& f, double r_lo,
                         double r_hi, int n_r = 8, int n_ang = 16);

// A = 2 pi sum_{j in group} b_j^2, B = conj(A); the first variation of the
// lambda-group power sum p_1 under z_k -> z_k + w is A w + B wbar.
std::pair<cplx, cplx> group_derivative_prediction(const ConeCoeffs& coeffs,
                                                  const std::vector<int>& group);

// b(lambda) for a cone of the degree-2 family, via the transplanted model
// solution and the resolvent correction; diagnostics carry both the annulus
// least-squares value and the exact-pairing value.
struct BLambdaResult {
    cplx b_ls;      // annulus least-squares extraction
    cplx b_pairing; // boundary-pairing identity evaluation
    cplx binf;      // (1/2) conj(z_k)/(1+|z_k|^2)
    double correction_norm = 0.0; // L2 norm of the resolvent correction
};
BLambdaResult b_lambda_degree2(const RationalMap& map, const CriticalData& data,
                               int k, double lambda, int L, int oversample = 2);

} // namespace speclab

#endif
